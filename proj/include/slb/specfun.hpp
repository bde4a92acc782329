#pragma once

// Modified Bessel functions I0, I1, I2, K0, K1, K2 of a positive real
// argument, their exponentially scaled variants, and the ratio functions
// the cylinder symbols are built from.
//
// Evaluation: power series for small z (long double accumulation), Chebyshev
// fits of the scaled functions in 1/z for mid-range K, and the standard
// large-z expansions with exponential scaling beyond. All ratios go through
// the scaled values so nothing overflows for z up to several hundred.

#include <cmath>
#include <cstddef>
#include <limits>

#include "slb/bessel_tables.hpp"
#include "slb/errors.hpp"

namespace slb::specfun {

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008;
inline constexpr double kSeriesCutI = 20.0;  // I_j: series below, asymptotic above
inline constexpr double kSeriesCutK = 2.0;   // K_j: series below, Chebyshev above
inline constexpr double kChebCutK = 18.0;    // K_j: Chebyshev below, asymptotic above

template <std::size_t N>
double clenshaw(const double (&c)[N], double a, double b, double x) {
    const double t = (2.0 * x - (a + b)) / (b - a);
    double d = 0.0, dd = 0.0;
    for (std::size_t i = N - 1; i >= 1; --i) {
        const double sv = d;
        d = 2.0 * t * d - dd + c[i];
        dd = sv;
    }
    return t * d - dd + 0.5 * c[0];
}

inline long double i0_series(long double z) {
    const long double q = z * z / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int m = 1; m < 60; ++m) {
        term *= q / (static_cast<long double>(m) * m);
        sum += term;
        if (term < sum * 1e-20L) break;
    }
    return sum;
}

inline long double i1_series(long double z) {
    const long double q = z * z / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int m = 1; m < 60; ++m) {
        term *= q / (static_cast<long double>(m) * (m + 1));
        sum += term;
        if (term < sum * 1e-20L) break;
    }
    return (z / 2.0L) * sum;
}

inline long double i2_series(long double z) {
    const long double q = z * z / 4.0L;
    long double term = 0.5L, sum = 0.5L;
    for (int m = 1; m < 60; ++m) {
        term *= q / (static_cast<long double>(m) * (m + 2));
        sum += term;
        if (term < sum * 1e-20L) break;
    }
    return q * sum;
}

// K_0 = -(log(z/2)+gamma) I_0 + sum_{m>=1} H_m q^m / (m!)^2
inline long double k0_series(long double z) {
    const long double q = z * z / 4.0L;
    long double term = 1.0L, sum = 0.0L, harmonic = 0.0L;
    for (int m = 1; m < 40; ++m) {
        term *= q / (static_cast<long double>(m) * m);
        harmonic += 1.0L / m;
        sum += term * harmonic;
        if (term * harmonic < 1e-22L * (1.0L + sum)) break;
    }
    return -(std::log(static_cast<double>(z) / 2.0) + kEulerGamma) * i0_series(z) + sum;
}

// K_1 = 1/z + log(z/2) I_1 - (z/4) sum_{m>=0} (H_m + H_{m+1} - 2 gamma) q^m / (m!(m+1)!)
inline long double k1_series(long double z) {
    const long double q = z * z / 4.0L;
    long double term = 1.0L, hm = 0.0L, hm1 = 1.0L;
    long double sum = term * (hm + hm1 - 2.0L * kEulerGamma);
    for (int m = 1; m < 40; ++m) {
        term *= q / (static_cast<long double>(m) * (m + 1));
        hm += 1.0L / m;
        hm1 += 1.0L / (m + 1);
        sum += term * (hm + hm1 - 2.0L * kEulerGamma);
        if (term * 4.0L < 1e-22L * (1.0L + std::fabs(static_cast<double>(sum)))) break;
    }
    return 1.0L / z + std::log(static_cast<double>(z) / 2.0) * i1_series(z) - (z / 4.0L) * sum;
}

// Large-z expansion sum_k s^k a_k / z^k with a_k = a_{k-1} (mu - (2k-1)^2)/(8k),
// mu = 4 nu^2; s = -1 for I (alternating) and +1 for K. Optimally truncated.
inline double asymptotic_tail(int nu, double z, double sign) {
    const double mu = 4.0 * nu * nu;
    double a = 1.0, sum = 1.0, prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 40; ++k) {
        const double m = 2.0 * k - 1.0;
        a *= (mu - m * m) / (8.0 * k * z);
        const double term = (sign < 0 && (k & 1)) ? -a : a;
        if (std::fabs(a) >= prev) break;
        sum += term;
        prev = std::fabs(a);
        if (prev < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

} // namespace detail

/// e^{-z} I_0(z)
inline double bessel_i0_scaled(double z) {
    if (z < 0) throw DomainError("bessel_i0: negative argument");
    if (z <= detail::kSeriesCutI)
        return static_cast<double>(detail::i0_series(z) * std::exp(static_cast<long double>(-z)));
    return detail::asymptotic_tail(0, z, -1.0) / std::sqrt(2.0 * M_PI * z);
}

/// e^{-z} I_1(z)
inline double bessel_i1_scaled(double z) {
    if (z < 0) throw DomainError("bessel_i1: negative argument");
    if (z <= detail::kSeriesCutI)
        return static_cast<double>(detail::i1_series(z) * std::exp(static_cast<long double>(-z)));
    return detail::asymptotic_tail(1, z, -1.0) / std::sqrt(2.0 * M_PI * z);
}

/// e^{-z} I_2(z)
inline double bessel_i2_scaled(double z) {
    if (z < 0) throw DomainError("bessel_i2: negative argument");
    if (z <= detail::kSeriesCutI)
        return static_cast<double>(detail::i2_series(z) * std::exp(static_cast<long double>(-z)));
    // I_2 = I_0 - (2/z) I_1; no cancellation at large z
    return bessel_i0_scaled(z) - 2.0 / z * bessel_i1_scaled(z);
}

/// e^{z} K_0(z)
inline double bessel_k0_scaled(double z) {
    if (z <= 0) throw DomainError("bessel_k0: argument must be positive");
    if (z <= detail::kSeriesCutK)
        return static_cast<double>(detail::k0_series(z) * std::exp(static_cast<long double>(z)));
    const double w = 1.0 / z;
    if (z <= 6.0)
        return detail::clenshaw(slb::detail::kChebK0_2_6, 1.0 / 6.0, 0.5, w) *
               std::sqrt(M_PI / (2.0 * z));
    if (z <= detail::kChebCutK)
        return detail::clenshaw(slb::detail::kChebK0_6_18, 1.0 / 18.0, 1.0 / 6.0, w) *
               std::sqrt(M_PI / (2.0 * z));
    return detail::asymptotic_tail(0, z, +1.0) * std::sqrt(M_PI / (2.0 * z));
}

/// e^{z} K_1(z)
inline double bessel_k1_scaled(double z) {
    if (z <= 0) throw DomainError("bessel_k1: argument must be positive");
    if (z <= detail::kSeriesCutK)
        return static_cast<double>(detail::k1_series(z) * std::exp(static_cast<long double>(z)));
    const double w = 1.0 / z;
    if (z <= 6.0)
        return detail::clenshaw(slb::detail::kChebK1_2_6, 1.0 / 6.0, 0.5, w) *
               std::sqrt(M_PI / (2.0 * z));
    if (z <= detail::kChebCutK)
        return detail::clenshaw(slb::detail::kChebK1_6_18, 1.0 / 18.0, 1.0 / 6.0, w) *
               std::sqrt(M_PI / (2.0 * z));
    return detail::asymptotic_tail(1, z, +1.0) * std::sqrt(M_PI / (2.0 * z));
}

/// e^{z} K_2(z), via K_2 = K_0 + (2/z) K_1 (all terms positive)
inline double bessel_k2_scaled(double z) {
    if (z <= 0) throw DomainError("bessel_k2: argument must be positive");
    return bessel_k0_scaled(z) + 2.0 / z * bessel_k1_scaled(z);
}

/// I_j(z), j in {0,1,2}. z = 0 returns the series limit.
inline double modified_bessel_i(int order, double z) {
    if (z < 0) throw DomainError("modified_bessel_i: negative argument");
    switch (order) {
        case 0: return bessel_i0_scaled(z) * std::exp(z);
        case 1: return bessel_i1_scaled(z) * std::exp(z);
        case 2: return bessel_i2_scaled(z) * std::exp(z);
        default: throw DomainError("modified_bessel_i: order must be 0, 1 or 2");
    }
}

/// K_j(z), j in {0,1,2}; diverges at z = 0.
inline double modified_bessel_k(int order, double z) {
    if (z <= 0) throw DomainError("modified_bessel_k: argument must be positive");
    switch (order) {
        case 0: return bessel_k0_scaled(z) * std::exp(-z);
        case 1: return bessel_k1_scaled(z) * std::exp(-z);
        case 2: return bessel_k2_scaled(z) * std::exp(-z);
        default: throw DomainError("modified_bessel_k: order must be 0, 1 or 2");
    }
}

enum class RatioKind { K1K0, K0K1, I1I0, I0I1 };

/// Bessel ratio through scaled values; no overflow for z <= 700.
inline double ratio(RatioKind kind, double z) {
    if (z <= 0) throw DomainError("ratio: argument must be positive");
    switch (kind) {
        case RatioKind::K1K0: return bessel_k1_scaled(z) / bessel_k0_scaled(z);
        case RatioKind::K0K1: return bessel_k0_scaled(z) / bessel_k1_scaled(z);
        case RatioKind::I1I0: return bessel_i1_scaled(z) / bessel_i0_scaled(z);
        case RatioKind::I0I1: return bessel_i0_scaled(z) / bessel_i1_scaled(z);
    }
    throw DomainError("ratio: bad kind");
}

/// Closed-form first derivative of the ratio, from K0' = -K1,
/// K1' = -K0 - K1/z, I0' = I1, I1' = I0 - I1/z.
inline double ratio_derivative(RatioKind kind, double z) {
    if (z <= 0) throw DomainError("ratio_derivative: argument must be positive");
    const double r = ratio(kind, z);
    switch (kind) {
        case RatioKind::K1K0: return r * r - r / z - 1.0;
        case RatioKind::K0K1: return r * r + r / z - 1.0;
        case RatioKind::I1I0: return 1.0 - r / z - r * r;
        case RatioKind::I0I1: return 1.0 + r / z - r * r;
    }
    throw DomainError("ratio_derivative: bad kind");
}

/// All six scaled values at once; the symbol layer consumes these.
struct ScaledBessel {
    double i0e, i1e, i2e, k0e, k1e, k2e;
    explicit ScaledBessel(double z)
        : i0e(bessel_i0_scaled(z)),
          i1e(bessel_i1_scaled(z)),
          i2e(bessel_i2_scaled(z)),
          k0e(bessel_k0_scaled(z)),
          k1e(bessel_k1_scaled(z)),
          k2e(bessel_k2_scaled(z)) {}
    // products I_a K_b: scale factors e^{-z} e^{z} cancel exactly
    double i0k0() const { return i0e * k0e; }
    double i0k1() const { return i0e * k1e; }
    double i1k0() const { return i1e * k0e; }
    double i1k1() const { return i1e * k1e; }
};

} // namespace slb::specfun
