#pragma once

#include <stdexcept>
#include <vector>

namespace skan {

// Parameter accounting for the original B-spline KAN and its SKAN
// counterpart. Only the arithmetic lives here; no spline network is built.
// Each Spl-KAN edge costs (grid_size + spline_order + 2) parameters, each
// SKAN edge costs exactly 1.

inline long long spl_param_count(const std::vector<int>& dims, int grid_size, int spline_order) {
    if (grid_size < 0) throw std::invalid_argument("spl_param_count: grid_size must be >= 0");
    if (spline_order < 0) throw std::invalid_argument("spl_param_count: spline_order must be >= 0");
    if (dims.size() < 2) throw std::invalid_argument("spl_param_count: need at least 2 dims");
    long long edges = 0;
    for (size_t l = 0; l + 1 < dims.size(); ++l)
        edges += static_cast<long long>(dims[l]) * dims[l + 1];
    return edges * (grid_size + spline_order + 2);
}

// Hidden width of a two-layer Spl-KAN n_in -> h -> n_out that spends
// `budget` parameters: ceil(budget / ((n_in + n_out) * (grid + order + 2))).
inline long long spl_hidden_size(long long budget, int n_in, int n_out, int grid_size,
                                 int spline_order) {
    const long long per_unit =
        static_cast<long long>(n_in + n_out) * (grid_size + spline_order + 2);
    if (per_unit <= 0) throw std::invalid_argument("spl_hidden_size: non-positive denominator");
    return (budget + per_unit - 1) / per_unit;
}

// SKAN analogue: one parameter per edge, so the per-unit cost is just
// n_in + n_out.
inline long long skan_hidden_size(long long budget, int n_in, int n_out) {
    const long long per_unit = n_in + n_out;
    if (per_unit <= 0) throw std::invalid_argument("skan_hidden_size: non-positive denominator");
    return (budget + per_unit - 1) / per_unit;
}

}  // namespace skan
