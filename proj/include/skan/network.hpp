#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "skan/layer.hpp"

namespace skan {

// A SKAN network: layers[l] maps dims[l] -> dims[l+1]; the whole network is
// their composition. dims of length 1 is the degenerate empty composition
// (identity, zero parameters).
template <class T>
struct Network {
    std::vector<int> dims;
    BasisId basis = BasisId::LShiftedSoftplus;
    std::vector<Layer<T>> layers;
};

inline void check_dims(const std::vector<int>& dims) {
    if (dims.empty()) throw std::invalid_argument("network: dims must be non-empty");
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("network: every dim must be >= 1");
}

template <class T>
Network<T> make_network(std::vector<int> dims, BasisId basis) {
    check_dims(dims);
    Network<T> net;
    net.basis = basis;
    for (size_t l = 0; l + 1 < dims.size(); ++l)
        net.layers.emplace_back(dims[l], dims[l + 1], basis);
    net.dims = std::move(dims);
    return net;
}

// Seeded init: layers in order, each K grid row-major (see init_uniform).
template <class T>
Network<T> make_network(std::vector<int> dims, BasisId basis, Rng& rng) {
    Network<T> net = make_network<T>(std::move(dims), basis);
    for (auto& l : net.layers) init_uniform(l, rng);
    return net;
}

inline long long total_param_count(const std::vector<int>& dims) {
    long long n = 0;
    for (size_t l = 0; l + 1 < dims.size(); ++l)
        n += static_cast<long long>(dims[l]) * dims[l + 1];
    return n;
}

template <class T>
long long total_param_count(const Network<T>& net) {
    return total_param_count(net.dims);
}

// Activations of one forward pass: acts[0] is the input, acts[l+1] the
// output of layer l; acts.back() are the logits. Backward recomputes edge
// partials from these and the K grids, so this is all the state it needs.
template <class T>
struct ForwardCache {
    std::vector<Mat<T>> acts;
    const Mat<T>& logits() const { return acts.back(); }
};

template <class T>
ForwardCache<T> net_forward_cached(const Network<T>& net, const Mat<T>& x) {
    if (x.cols != net.dims.front())
        throw std::invalid_argument("net_forward: input has " + std::to_string(x.cols) +
                                    " columns, network expects " +
                                    std::to_string(net.dims.front()));
    ForwardCache<T> cache;
    cache.acts.reserve(net.layers.size() + 1);
    cache.acts.push_back(x);
    for (const auto& l : net.layers) cache.acts.push_back(layer_forward(l, cache.acts.back()));
    return cache;
}

template <class T>
Mat<T> net_forward(const Network<T>& net, const Mat<T>& x) {
    return net_forward_cached(net, x).acts.back();
}

// Chain rule over the layer sequence: layer l+1's d_x feeds layer l's d_out.
// `want_input_grad = false` leaves grads[0].d_x empty (nothing consumes the
// gradient at the pixels; skipping it saves a third of the first layer's
// backward work).
template <class T>
std::vector<LayerGrads<T>> net_backward(const Network<T>& net, const ForwardCache<T>& cache,
                                        const Mat<T>& d_logits, bool want_input_grad = true) {
    if (cache.acts.size() != net.layers.size() + 1)
        throw std::invalid_argument("net_backward: cache does not match network (have " +
                                    std::to_string(cache.acts.size()) + " activations for " +
                                    std::to_string(net.layers.size()) + " layers)");
    if (!d_logits.same_shape(cache.acts.back()))
        throw std::invalid_argument("net_backward: d_logits shape mismatch");
    std::vector<LayerGrads<T>> grads(net.layers.size());
    const Mat<T>* upstream = &d_logits;
    for (size_t l = net.layers.size(); l-- > 0;) {
        const bool want_dx = (l > 0) || want_input_grad;
        grads[l] = layer_backward(net.layers[l], cache.acts[l], *upstream, want_dx);
        upstream = &grads[l].d_x;
    }
    return grads;
}

}  // namespace skan
