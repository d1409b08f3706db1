#pragma once

#include <cstdint>
#include <vector>

#include "skan/basis.hpp"

namespace skan {

struct GradcheckReport {
    double max_rel_err = 0.0;
    long long checked = 0;
    long long skipped = 0;  // parameters adjacent to a base-function kink
    double tolerance = 1e-6;
    bool pass() const { return checked > 0 && max_rel_err <= tolerance; }
};

// Compares every parameter's analytic gradient of a softmax cross-entropy
// loss against central finite differences (double precision). Layer sizes
// are capped at 32: finite differencing a [784,100,10] net is refused.
// Parameters whose pre-activation sits within `kink_band` of a base-function
// kink for any batch row are skipped (finite differences are meaningless
// across a slope jump).
GradcheckReport gradcheck_network(BasisId basis, const std::vector<int>& dims, uint64_t seed,
                                  int batch = 4, double step = 1e-5, double tolerance = 1e-6,
                                  double kink_band = 1e-4);

}  // namespace skan
