#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string_view>
#include <type_traits>

#include "skan/fastmath.hpp"

namespace skan {

// The nine single-parameter edge-function families. Each is a fixed base
// nonlinearity applied to a scaled input:
//
//     phi(x; k) = base(k * x)
//
// with k the sole learnable scalar. Under this convention LShiftedSoftplus
// is identically zero at k = 0 and behaves like (k/2)*x for small k*x, which
// is what makes it a clean zero-init edge function (plain LSoftplus at k = 0
// is the constant ln 2 instead).
enum class BasisId {
    LRelu,
    LLeakyRelu,
    LSwish,
    LMish,
    LSoftplus,
    LHardSigmoid,
    LElu,
    LShiftedSoftplus,  // "LSS"
    LGelu,
};

inline constexpr int kNumBases = 9;

// phi and its two partials at one (x, k) point.
struct BasisEval {
    double value;
    double d_dx;
    double d_dk;
};

struct BasisInfo {
    BasisId id;
    const char* name;         // lowercase CLI spelling
    bool reported_trainable;  // false for the three that failed to train at
                              // [784,100,10] on MNIST (lelu, lleakyrelu,
                              // lhardsigmoid); the engine trains them anyway
};

// All nine bases in fixed order, with trainability flags.
std::span<const BasisInfo> list_bases();
const BasisInfo& basis_info(BasisId id);
const char* basis_name(BasisId id);
BasisId parse_basis(std::string_view name);  // accepts "lss" and "lshiftedsoftplus"

// ---------------------------------------------------------------------------
// Scalar transcendental helpers. double = libm (reference path);
// float = fastmath approximations (training speed path).
// ---------------------------------------------------------------------------
namespace act {

template <class T>
inline T exp_(T z) {
    if constexpr (std::is_same_v<T, float>)
        return fastmath::exp_f(z);
    else
        return std::exp(z);
}

template <class T>
inline T log1p_(T z) {
    if constexpr (std::is_same_v<T, float>)
        return fastmath::log1p_f(z);
    else
        return std::log1p(z);
}

template <class T>
inline T tanh_(T z) {
    if constexpr (std::is_same_v<T, float>)
        return fastmath::tanh_f(z);
    else
        return std::tanh(z);
}

template <class T>
inline T expm1_(T z) {
    if constexpr (std::is_same_v<T, float>)
        return fastmath::expm1_f(z);
    else
        return std::expm1(z);
}

// ln(1 + e^z) without overflow anywhere on the real line:
// max(z, 0) + ln(1 + e^-|z|).
template <class T>
inline T softplus_(T z) {
    const T az = z < 0 ? -z : z;
    const T mz = z > 0 ? z : T(0);
    return mz + log1p_(exp_(-az));
}

// 1 / (1 + e^-z), evaluated on the non-overflowing side.
template <class T>
inline T sigmoid_(T z) {
    if (z >= 0) return T(1) / (T(1) + exp_(-z));
    const T e = exp_(z);
    return e / (T(1) + e);
}

}  // namespace act

// ---------------------------------------------------------------------------
// Base nonlinearities: value and slope (d base / dz). At the kink points of
// the piecewise bases the slope is the limit from the positive side.
// ---------------------------------------------------------------------------

template <class T>
struct ReluBase {
    static T value(T z) { return z > 0 ? z : T(0); }
    static T slope(T z) { return z >= 0 ? T(1) : T(0); }
};

template <class T>
struct LeakyReluBase {
    static constexpr T alpha = T(0.01);
    static T value(T z) { return z >= 0 ? z : alpha * z; }
    static T slope(T z) { return z >= 0 ? T(1) : alpha; }
};

template <class T>
struct SwishBase {
    static T value(T z) { return z * act::sigmoid_(z); }
    static T slope(T z) {
        const T s = act::sigmoid_(z);
        return s * (T(1) + z * (T(1) - s));
    }
};

template <class T>
struct MishBase {
    static T value(T z) { return z * act::tanh_(act::softplus_(z)); }
    static T slope(T z) {
        const T t = act::tanh_(act::softplus_(z));
        return t + z * (T(1) - t * t) * act::sigmoid_(z);
    }
};

template <class T>
struct SoftplusBase {
    static T value(T z) { return act::softplus_(z); }
    static T slope(T z) { return act::sigmoid_(z); }
};

// min(max(0, (z+3)/6), 1); slope 1/6 on [-3, 3).
template <class T>
struct HardSigmoidBase {
    static T value(T z) {
        const T y = (z + T(3)) * (T(1) / T(6));
        return y < 0 ? T(0) : (y > 1 ? T(1) : y);
    }
    static T slope(T z) { return (z >= T(-3) && z < T(3)) ? T(1) / T(6) : T(0); }
};

template <class T>
struct EluBase {
    static T value(T z) { return z < 0 ? act::expm1_(z) : z; }
    static T slope(T z) { return z < 0 ? act::exp_(z) : T(1); }
};

// Softplus shifted to pass through the origin. Same code path as
// SoftplusBase so the two differ by exactly ln 2.
template <class T>
struct ShiftedSoftplusBase {
    static T value(T z) { return SoftplusBase<T>::value(z) - std::numbers::ln2_v<T>; }
    static T slope(T z) { return SoftplusBase<T>::slope(z); }
};

// tanh form: 0.5 z (1 + tanh(c (z + a z^3))), c = sqrt(2/pi), a = 0.044715.
template <class T>
struct GeluBase {
    static constexpr T c = T(0.7978845608028654);
    static constexpr T a = T(0.044715);
    static T value(T z) {
        return T(0.5) * z * (T(1) + act::tanh_(c * (z + a * z * z * z)));
    }
    static T slope(T z) {
        const T t = act::tanh_(c * (z + a * z * z * z));
        const T du = c * (T(1) + T(3) * a * z * z);
        return T(0.5) * (T(1) + t) + T(0.5) * z * (T(1) - t * t) * du;
    }
};

// Dispatch a generic callable over the base type for `id`.
// Usage: with_base<T>(id, [&]<class B>(std::type_identity<B>) { ... });
template <class T, class Fn>
decltype(auto) with_base(BasisId id, Fn&& fn) {
    switch (id) {
        case BasisId::LRelu: return fn(std::type_identity<ReluBase<T>>{});
        case BasisId::LLeakyRelu: return fn(std::type_identity<LeakyReluBase<T>>{});
        case BasisId::LSwish: return fn(std::type_identity<SwishBase<T>>{});
        case BasisId::LMish: return fn(std::type_identity<MishBase<T>>{});
        case BasisId::LSoftplus: return fn(std::type_identity<SoftplusBase<T>>{});
        case BasisId::LHardSigmoid: return fn(std::type_identity<HardSigmoidBase<T>>{});
        case BasisId::LElu: return fn(std::type_identity<EluBase<T>>{});
        case BasisId::LShiftedSoftplus: return fn(std::type_identity<ShiftedSoftplusBase<T>>{});
        case BasisId::LGelu: return fn(std::type_identity<GeluBase<T>>{});
    }
    throw std::invalid_argument("with_base: unknown BasisId");
}

namespace detail {
inline void require_finite(double x, double k) {
    if (!std::isfinite(x) || !std::isfinite(k))
        throw std::domain_error("basis: non-finite input");
}
}  // namespace detail

// phi_id(x; k), reference (double) path.
inline double basis_eval(BasisId id, double x, double k) {
    detail::require_finite(x, k);
    return with_base<double>(id, [&]<class B>(std::type_identity<B>) { return B::value(k * x); });
}

// phi and both partials: d/dx = k * slope(kx), d/dk = x * slope(kx).
inline BasisEval basis_grad(BasisId id, double x, double k) {
    detail::require_finite(x, k);
    return with_base<double>(id, [&]<class B>(std::type_identity<B>) {
        const double z = k * x;
        const double s = B::slope(z);
        return BasisEval{B::value(z), k * s, x * s};
    });
}

// z-coordinates where the base's slope jumps (empty for the smooth bases).
// Needed by the finite-difference harness to stay off the kinks.
std::span<const double> basis_kinks(BasisId id);

}  // namespace skan
