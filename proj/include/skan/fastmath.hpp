#pragma once

#include <bit>
#include <cstdint>

namespace skan::fastmath {

// Branch-free float transcendentals for the 32-bit training path. Plain
// arithmetic and bit casts only, so the batched layer kernels auto-vectorize
// under -O3; absolute error is a few 1e-7, below float round-off noise at
// training scale. The 64-bit path uses libm and is the reference.
//
// Caveat (documented, relied on by the divergence logic): these functions
// clamp their argument and therefore do not faithfully propagate NaN/Inf.
// Run health is judged from the raw loss and parameter values instead.

// e^x, clamped to x in [-87, 88] (result 1.6e-38 .. 1.7e38). Cephes-style:
// split x = n*ln2 + r, degree-5 minimax for e^r, exponent via bit layout.
inline float exp_f(float x) {
    x = x < -87.0f ? -87.0f : x;
    x = x > 88.0f ? 88.0f : x;
    const float t = x * 1.44269504088896341f;
    const float big = 12582912.0f;       // 1.5 * 2^23: (t + big) - big rounds t to integer
    const float n = (t + big) - big;
    const float r = (x - n * 0.693359375f) - n * -2.12194440e-4f;
    float p = 1.9875691500e-4f;
    p = p * r + 1.3981999507e-3f;
    p = p * r + 8.3334519073e-3f;
    p = p * r + 4.1665795894e-2f;
    p = p * r + 1.6666665459e-1f;
    p = p * r + 5.0000001201e-1f;
    p = p * r * r + r + 1.0f;
    return std::bit_cast<float>(std::bit_cast<int32_t>(p) + (int32_t(n) << 23));
}

// ln(x) for finite x >= 2^-126 (no denormal handling; callers feed x >= 1).
inline float log_f(float x) {
    const int32_t bits = std::bit_cast<int32_t>(x);
    int32_t e = ((bits >> 23) & 0xff) - 126;  // x = m * 2^e, m in [0.5, 1)
    float m = std::bit_cast<float>((bits & 0x007fffff) | 0x3f000000);
    const bool low = m < 0.7071067811865476f;
    e = low ? e - 1 : e;
    m = low ? m + m - 1.0f : m - 1.0f;
    const float z = m * m;
    float p = 7.0376836292e-2f;
    p = p * m - 1.1514610310e-1f;
    p = p * m + 1.1676998740e-1f;
    p = p * m - 1.2420140846e-1f;
    p = p * m + 1.4249322787e-1f;
    p = p * m - 1.6668057665e-1f;
    p = p * m + 2.0000714765e-1f;
    p = p * m - 2.4999993993e-1f;
    p = p * m + 3.3333331174e-1f;
    const float fe = float(e);
    float y = p * m * z;
    y += -2.12194440e-4f * fe;
    y += -0.5f * z;
    return m + y + 0.693359375f * fe;
}

// ln(1+u) for u >= 0. Computed through 1+u, so contributions below float
// epsilon are truncated; fine for activation values, not for reference math.
inline float log1p_f(float u) { return log_f(1.0f + u); }

inline float sigmoid_f(float z) { return 1.0f / (1.0f + exp_f(-z)); }

inline float tanh_f(float z) {
    z = z < -9.1f ? -9.1f : z;
    z = z > 9.1f ? 9.1f : z;
    return 1.0f - 2.0f / (1.0f + exp_f(z + z));
}

// e^x - 1 with a Taylor blend near zero where exp_f's absolute error would
// swamp the result.
inline float expm1_f(float x) {
    const float t = x * (1.0f + x * (0.5f + x * (1.0f / 6.0f + x * (1.0f / 24.0f + x * (1.0f / 120.0f)))));
    const float e = exp_f(x) - 1.0f;
    const float ax = x < 0 ? -x : x;
    return ax < 0.125f ? t : e;
}

}  // namespace skan::fastmath
