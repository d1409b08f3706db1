#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "skan/basis.hpp"
#include "skan/matrix.hpp"
#include "skan/rng.hpp"

namespace skan {

// One SKAN layer: an n_out x n_in grid of edge functions phi(.; k[i,j]) and
// summation nodes. k[i,j] is the only parameter of edge (i,j), so the layer
// has exactly n_in * n_out parameters.
template <class T>
struct Layer {
    int n_in = 0;
    int n_out = 0;
    BasisId basis = BasisId::LShiftedSoftplus;
    Mat<T> k;  // n_out x n_in

    Layer() = default;
    Layer(int n_in_, int n_out_, BasisId basis_)
        : n_in(n_in_), n_out(n_out_), basis(basis_), k(n_out_, n_in_) {
        if (n_in_ < 1 || n_out_ < 1)
            throw std::invalid_argument("Layer: sizes must be >= 1, got " +
                                        std::to_string(n_in_) + "x" + std::to_string(n_out_));
    }
};

template <class T>
struct LayerGrads {
    Mat<T> d_k;  // n_out x n_in
    Mat<T> d_x;  // batch x n_in (empty when the caller skipped input grads)
};

template <class T>
long long layer_param_count(const Layer<T>& l) {
    return static_cast<long long>(l.n_in) * l.n_out;
}

// Uniform on [-1/sqrt(n_in), +1/sqrt(n_in)], drawn row-major. Under the
// small-k linearization phi_lss(x;k) ~ (k/2)x this starts the layer as a
// half-scale fan-in-normalized linear map.
template <class T>
void init_uniform(Layer<T>& l, Rng& rng) {
    const double bound = 1.0 / std::sqrt(double(l.n_in));
    for (auto& w : l.k.data) w = T(rng.uniform(-bound, bound));
}

namespace detail {

// out[b,i] = sum_j base(k[i,j] * x[b,j]), summed in ascending j.
// Two passes per (b,i): a vectorizable elementwise pass into `phi`,
// then an ordered scalar sum.
template <class T, class B>
void layer_forward_impl(const Layer<T>& l, const Mat<T>& x, Mat<T>& out) {
    std::vector<T> phi(size_t(l.n_in));
    for (int b = 0; b < x.rows; ++b) {
        const T* xb = x.row(b);
        T* ob = out.row(b);
        for (int i = 0; i < l.n_out; ++i) {
            const T* ki = l.k.row(i);
            T* ph = phi.data();
            for (int j = 0; j < l.n_in; ++j) ph[j] = B::value(ki[j] * xb[j]);
            T acc = 0;
            for (int j = 0; j < l.n_in; ++j) acc += ph[j];
            ob[i] = acc;
        }
    }
}

// dK[i,j] = sum_b dOut[b,i] * x[b,j] * slope(z_bij)   (ascending b)
// dX[b,j] = sum_i dOut[b,i] * k[i,j] * slope(z_bij)   (ascending i)
// Partials are recomputed from x and k; nothing per-edge is cached. dK
// accumulates in double regardless of T.
template <class T, class B, bool WantDx>
void layer_backward_impl(const Layer<T>& l, const Mat<T>& x, const Mat<T>& d_out,
                         Mat<double>& dk_acc, Mat<T>* d_x) {
    for (int b = 0; b < x.rows; ++b) {
        const T* xb = x.row(b);
        T* dxb = WantDx ? d_x->row(b) : nullptr;
        for (int i = 0; i < l.n_out; ++i) {
            const T g = d_out(b, i);
            const T* ki = l.k.row(i);
            double* dki = dk_acc.row(i);
            if constexpr (WantDx) {
                for (int j = 0; j < l.n_in; ++j) {
                    const T s = B::slope(ki[j] * xb[j]);
                    dki[j] += double(g * xb[j] * s);
                    dxb[j] += g * ki[j] * s;
                }
            } else {
                for (int j = 0; j < l.n_in; ++j) {
                    const T s = B::slope(ki[j] * xb[j]);
                    dki[j] += double(g * xb[j] * s);
                }
            }
        }
    }
}

}  // namespace detail

template <class T>
Mat<T> layer_forward(const Layer<T>& l, const Mat<T>& x) {
    if (x.cols != l.n_in)
        throw std::invalid_argument("layer_forward: input has " + std::to_string(x.cols) +
                                    " columns, layer expects " + std::to_string(l.n_in));
    Mat<T> out(x.rows, l.n_out);
    with_base<T>(l.basis, [&]<class B>(std::type_identity<B>) {
        detail::layer_forward_impl<T, B>(l, x, out);
    });
    return out;
}

// `want_dx = false` skips the d_x grid (used for the first layer of a
// network, whose input gradient has no consumer).
template <class T>
LayerGrads<T> layer_backward(const Layer<T>& l, const Mat<T>& x, const Mat<T>& d_out,
                             bool want_dx = true) {
    if (x.cols != l.n_in)
        throw std::invalid_argument("layer_backward: input has " + std::to_string(x.cols) +
                                    " columns, layer expects " + std::to_string(l.n_in));
    if (d_out.rows != x.rows || d_out.cols != l.n_out)
        throw std::invalid_argument("layer_backward: d_out is " + std::to_string(d_out.rows) +
                                    "x" + std::to_string(d_out.cols) + ", expected " +
                                    std::to_string(x.rows) + "x" + std::to_string(l.n_out));
    LayerGrads<T> g;
    Mat<double> dk_acc(l.n_out, l.n_in);
    if (want_dx) g.d_x = Mat<T>(x.rows, l.n_in);
    with_base<T>(l.basis, [&]<class B>(std::type_identity<B>) {
        if (want_dx)
            detail::layer_backward_impl<T, B, true>(l, x, d_out, dk_acc, &g.d_x);
        else
            detail::layer_backward_impl<T, B, false>(l, x, d_out, dk_acc, nullptr);
    });
    g.d_k = Mat<T>(l.n_out, l.n_in);
    for (size_t i = 0; i < dk_acc.data.size(); ++i) g.d_k.data[i] = T(dk_acc.data[i]);
    return g;
}

}  // namespace skan
