#include "skan/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "skan/metrics.hpp"
#include "skan/network.hpp"
#include "skan/rng.hpp"

namespace skan {

GradcheckReport gradcheck_network(BasisId basis, const std::vector<int>& dims, uint64_t seed,
                                  int batch, double step, double tolerance, double kink_band) {
    check_dims(dims);
    if (dims.size() < 2) throw std::invalid_argument("gradcheck: need at least one layer");
    for (const int d : dims)
        if (d > 32)
            throw std::invalid_argument("gradcheck: dim " + std::to_string(d) +
                                        " exceeds the cap of 32 (finite differencing a net this "
                                        "large is not meaningful)");
    if (batch < 1) throw std::invalid_argument("gradcheck: batch must be >= 1");

    Rng rng(seed);
    Network<double> net = make_network<double>(dims, basis, rng);
    Mat<double> x(batch, dims.front());
    for (auto& v : x.data) v = rng.uniform(-1.0, 1.0);
    std::vector<int> labels(static_cast<size_t>(batch));
    for (auto& l : labels) l = int(rng.below(uint64_t(dims.back())));

    const auto loss_at = [&]() {
        return softmax_xent(net_forward(net, x), labels).loss;
    };

    const ForwardCache<double> cache = net_forward_cached(net, x);
    const XentResult<double> xent = softmax_xent(cache.logits(), labels);
    const std::vector<LayerGrads<double>> grads = net_backward(net, cache, xent.d_logits);

    const std::span<const double> kinks = basis_kinks(basis);
    GradcheckReport report;
    report.tolerance = tolerance;
    for (size_t l = 0; l < net.layers.size(); ++l) {
        Layer<double>& layer = net.layers[l];
        const Mat<double>& acts = cache.acts[l];
        for (int i = 0; i < layer.n_out; ++i) {
            for (int j = 0; j < layer.n_in; ++j) {
                bool near_kink = false;
                for (const double z0 : kinks)
                    for (int b = 0; b < batch && !near_kink; ++b)
                        near_kink = std::abs(layer.k(i, j) * acts(b, j) - z0) <= kink_band;
                if (near_kink) {
                    ++report.skipped;
                    continue;
                }
                double& theta = layer.k(i, j);
                const double saved = theta;
                theta = saved + step;
                const double loss_hi = loss_at();
                theta = saved - step;
                const double loss_lo = loss_at();
                theta = saved;
                const double fd = (loss_hi - loss_lo) / (2.0 * step);
                const double analytic = grads[l].d_k(i, j);
                const double rel = std::abs(analytic - fd) / std::max(1.0, std::abs(analytic));
                report.max_rel_err = std::max(report.max_rel_err, rel);
                ++report.checked;
            }
        }
    }
    return report;
}

}  // namespace skan
