// Special functions used by the closed-form state families:
// modified Bessel I0, complete elliptic integral K(m) and harmonic-oscillator
// eigenfunctions psi_n(x) (hbar = m = omega = 1).
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pasq/error.hpp"

namespace pasq::special {

/// Below this |t| the power series is used for I0, above it the asymptotic expansion.
inline constexpr double kBesselSeriesLimit = 15.0;

/// Default cap on the Hermite-function order.
inline constexpr std::size_t kMaxHermiteOrder = 512;

namespace detail {

// sum_k (t^2/4)^k / (k!)^2, all terms positive
inline double bessel_i0_series(double t) {
    const double q = 0.25 * t * t;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// sum_k prod_{j<=k} (2j-1)^2 / (8 j t); truncated at the smallest term
inline double bessel_i0_asymptotic_sum(double t) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * t);
        if (next > term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

} // namespace detail

/// Exponentially scaled Bessel function e^{-|t|} I0(t). Never overflows.
inline double bessel_i0_scaled(double t) {
    if (!std::isfinite(t)) throw DomainError("bessel_i0_scaled: argument must be finite");
    const double a = std::fabs(t);
    if (a <= kBesselSeriesLimit) return std::exp(-a) * detail::bessel_i0_series(a);
    return detail::bessel_i0_asymptotic_sum(a) / std::sqrt(2.0 * std::numbers::pi * a);
}

/// Modified Bessel function of the first kind, order zero.
/// Throws OverflowError once I0(t) exceeds the double range (|t| >~ 713.98).
inline double bessel_i0(double t) {
    if (!std::isfinite(t)) throw DomainError("bessel_i0: argument must be finite");
    const double a = std::fabs(t);
    if (a <= kBesselSeriesLimit) return detail::bessel_i0_series(a);
    const double sum = detail::bessel_i0_asymptotic_sum(a);
    const double log_value = a - 0.5 * std::log(2.0 * std::numbers::pi * a) + std::log(sum);
    if (log_value >= std::log(std::numeric_limits<double>::max()))
        throw OverflowError("bessel_i0: I0(" + std::to_string(t) + ") overflows double");
    return std::exp(a - 0.5 * std::log(2.0 * std::numbers::pi * a)) * sum;
}

/// Arithmetic-geometric mean of two non-negative numbers.
inline double agm(double a, double b) {
    for (int it = 0; it < 64; ++it) {
        if (std::fabs(a - b) <= 1e-16 * a) break;
        const double mean = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = mean;
    }
    return 0.5 * (a + b);
}

/// Complete elliptic integral of the first kind in the parameter convention,
/// K(m) = int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta), 0 <= m < 1.
inline double elliptic_k(double m) {
    if (!(m >= 0.0)) throw DomainError("elliptic_k: parameter m must be >= 0");
    if (!(m < 1.0)) throw DomainError("elliptic_k: logarithmic divergence at m >= 1");
    return std::numbers::pi / (2.0 * agm(1.0, std::sqrt(1.0 - m)));
}

namespace detail {

// Runs the normalized three-term recurrence up to order n_max and calls
// sink(n, value) for every order. Values are carried with a separate log scale so
// that e^{-x^2/2} may underflow while high orders stay representable.
template <class Sink>
void hermite_recurrence(std::size_t n_max, double x, Sink&& sink) {
    constexpr double kRescale = 1e150;
    const double log_rescale = std::log(kRescale);
    double log_scale = -0.5 * x * x;
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);

    auto emit = [&](std::size_t n, double v) {
        if (v == 0.0) {
            sink(n, 0.0);
            return;
        }
        const double mag = std::exp(log_scale + std::log(std::fabs(v)));
        sink(n, v < 0.0 ? -mag : mag);
    };

    emit(0, cur);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double dn = static_cast<double>(n);
        const double next = x * std::sqrt(2.0 / dn) * cur - std::sqrt((dn - 1.0) / dn) * prev;
        prev = cur;
        cur = next;
        if (std::fabs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += log_rescale;
        }
        emit(n, cur);
    }
}

} // namespace detail

/// Harmonic-oscillator eigenfunction psi_n(x), orthonormal on the real line,
/// psi_0 = pi^{-1/4} e^{-x^2/2}, standard Hermite sign convention.
inline double hermite_psi(std::size_t n, double x, std::size_t max_order = kMaxHermiteOrder) {
    if (n >= max_order)
        throw ConfigError("hermite_psi: order " + std::to_string(n) + " exceeds cap " +
                          std::to_string(max_order));
    double out = 0.0;
    detail::hermite_recurrence(n, x, [&](std::size_t k, double v) {
        if (k == n) out = v;
    });
    return out;
}

/// psi_0(x) ... psi_{count-1}(x) in one recurrence pass.
inline std::vector<double> hermite_psi_all(std::size_t count, double x,
                                           std::size_t max_order = kMaxHermiteOrder) {
    if (count == 0) return {};
    if (count > max_order)
        throw ConfigError("hermite_psi_all: order " + std::to_string(count - 1) +
                          " exceeds cap " + std::to_string(max_order));
    std::vector<double> out(count);
    detail::hermite_recurrence(count - 1, x, [&](std::size_t k, double v) { out[k] = v; });
    return out;
}

} // namespace pasq::special
