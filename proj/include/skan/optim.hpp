#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "skan/network.hpp"

namespace skan {

// Adam with bias correction, one moment pair per layer K grid. Defaults are
// the universal ones (beta1 0.9, beta2 0.999, eps 1e-8, no weight decay).
// Per-element update math runs in double; moments are stored at parameter
// precision.
template <class T>
struct Adam {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long long t = 0;
    std::vector<Mat<T>> m;
    std::vector<Mat<T>> v;

    static Adam for_network(const Network<T>& net, double lr) {
        Adam a;
        a.lr = lr;
        for (const auto& l : net.layers) {
            a.m.emplace_back(l.n_out, l.n_in);
            a.v.emplace_back(l.n_out, l.n_in);
        }
        return a;
    }

    void step(Network<T>& net, const std::vector<LayerGrads<T>>& grads) {
        if (grads.size() != net.layers.size() || m.size() != net.layers.size())
            throw std::invalid_argument("Adam::step: gradient/state count mismatch");
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, double(t));
        const double bc2 = 1.0 - std::pow(beta2, double(t));
        for (size_t l = 0; l < net.layers.size(); ++l) {
            Mat<T>& k = net.layers[l].k;
            const Mat<T>& g = grads[l].d_k;
            if (!g.same_shape(k)) throw std::invalid_argument("Adam::step: gradient shape mismatch");
            for (size_t i = 0; i < k.data.size(); ++i) {
                const double gi = double(g.data[i]);
                const double mi = beta1 * double(m[l].data[i]) + (1.0 - beta1) * gi;
                const double vi = beta2 * double(v[l].data[i]) + (1.0 - beta2) * gi * gi;
                m[l].data[i] = T(mi);
                v[l].data[i] = T(vi);
                const double upd = (mi / bc1) / (std::sqrt(vi / bc2) + eps);
                k.data[i] = T(double(k.data[i]) - lr * upd);
            }
        }
    }
};

}  // namespace skan
