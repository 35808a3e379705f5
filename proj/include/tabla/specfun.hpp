#pragma once

/**
 * @file specfun.hpp
 * @brief Bessel functions of the first kind from the ascending power series.
 *
 * J_m(x) = sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!)
 *
 * The truncated series (bessel_series) is evaluated in double precision and
 * is meant for tiny arguments, where four terms are already exact to
 * rounding. The converged evaluation (bessel_j) accumulates in extended
 * precision: for x ~ 40 the largest individual terms reach 1e16, so a
 * double-precision sum would lose every significant digit to cancellation.
 */

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tabla {

/// Largest order accepted by the series routines (factorial overflow guard).
inline constexpr int kMaxSeriesOrder = 60;

namespace detail {

#if defined(__SIZEOF_FLOAT128__)
using wide_real = __float128;
#else
using wide_real = long double;
#endif

inline void check_series_args(int m, double x) {
    if (m < 0 || m > kMaxSeriesOrder)
        throw std::domain_error("bessel: order " + std::to_string(m) + " outside [0, 60]");
    if (!(x >= 0.0))
        throw std::domain_error("bessel: argument must be non-negative");
}

template <typename Real>
Real leading_term(int m, Real half_x) {
    Real t = 1;
    for (int i = 1; i <= m; ++i) t *= half_x / Real(i);
    return t;
}

template <typename Real>
Real abs_of(Real v) { return v < 0 ? -v : v; }

}  // namespace detail

/// Partial sum of the ascending series of J_m(x) with `terms` terms.
inline double bessel_series(int m, double x, int terms) {
    detail::check_series_args(m, x);
    if (terms < 1) throw std::domain_error("bessel_series: terms must be >= 1");
    const double half = 0.5 * x;
    const double q = -half * half;
    double term = detail::leading_term<double>(m, half);
    double sum = 0.0;
    for (int k = 0; k < terms; ++k) {
        sum += term;
        term *= q / (double(k + 1) * double(k + 1 + m));
    }
    return sum;
}

/// Converged series evaluation of J_m(x).
inline double bessel_j(int m, double x) {
    detail::check_series_args(m, x);
    using W = detail::wide_real;
    const W half = W(x) / 2;
    const W q = -half * half;
    W term = detail::leading_term<W>(m, half);
    W sum = 0;
    W largest = 0;
    // Past the peak the terms fall off factorially; the cap is never the
    // binding condition for x below ~100.
    for (int k = 0; k < 400; ++k) {
        sum += term;
        const W mag = detail::abs_of(term);
        if (mag > largest) largest = mag;
        const bool past_peak = W(k) * W(k + m) > half * half;
        if (past_peak && (mag <= W(1e-15) * detail::abs_of(sum) || mag <= W(1e-32) * largest))
            break;
        term *= q / (W(k + 1) * W(k + 1 + m));
    }
    return static_cast<double>(sum);
}

/// J_m'(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2, with J_{-1} = -J_1.
inline double bessel_j_prime(int m, double x) {
    detail::check_series_args(m, x);
    if (m == 0) return -bessel_j(1, x);
    return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

/// Derivative of the `terms`-term truncated series (same identity).
inline double bessel_series_prime(int m, double x, int terms) {
    if (m == 0) return -bessel_series(1, x, terms);
    return 0.5 * (bessel_series(m - 1, x, terms) - bessel_series(m + 1, x, terms));
}

/// k-th positive root of J_m, to 1e-10 absolute.
///
/// Scans J_m in steps of 0.1 starting at x = m (every root lies above m)
/// and bisects the bracketing interval.
inline double bessel_zero(int m, int k) {
    if (m < 0 || m > 10) throw std::domain_error("bessel_zero: order must be in [0, 10]");
    if (k < 1 || k > 10) throw std::domain_error("bessel_zero: index must be in [1, 10]");
    constexpr double step = 0.1;
    const double x_limit = m + 20.0 * k;
    double lo = m;
    double f_lo = bessel_j(m, lo);
    int found = 0;
    for (int i = 1;; ++i) {
        const double hi = m + step * i;
        if (hi > x_limit)
            throw std::runtime_error("bessel_zero: no sign change found for J_" + std::to_string(m) +
                                     " root " + std::to_string(k));
        const double f_hi = bessel_j(m, hi);
        if ((f_lo < 0.0) != (f_hi < 0.0) && f_lo != 0.0) {
            if (++found == k) {
                double a = lo, b = hi, fa = f_lo;
                while (b - a > 1e-12) {
                    const double mid = 0.5 * (a + b);
                    const double fm = bessel_j(m, mid);
                    if ((fm < 0.0) == (fa < 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                return 0.5 * (a + b);
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
}

}  // namespace tabla
