#pragma once

// Bessel functions J0, J1, I0 and the large-argument Hankel function H0^(1).
//
// J0/J1: power series (summed in long double) for |x| <= 16, Hankel
// asymptotic expansion beyond. At x = 16 the smallest asymptotic term is
// ~e^{-32} and the series cancellation costs ~1e6 * 1e-19, so both
// branches are good to well under 1e-12 at the switch.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace arcdet {

inline constexpr double kBesselSwitch = 16.0;

namespace detail {

inline double bessel_j_series(int order, double x) {
  const long double h = 0.5L * x;
  const long double h2 = h * h;
  long double term = (order == 0) ? 1.0L : h;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / (static_cast<long double>(k) * (k + order));
    sum += term;
    if (std::fabs(term) < 1e-24L * (1.0L + std::fabs(sum)) && h2 < (k + 1.0L) * (k + 1.0L)) break;
  }
  return static_cast<double>(sum);
}

// Hankel expansion, x > 0.
inline double bessel_j_asymptotic(int order, double x) {
  const double mu = 4.0 * order * order;
  double p = 0.0, q = 0.0;
  double a = 1.0;  // a_k(nu) / x^k
  double prev = INFINITY;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) a *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
    const double mag = std::fabs(a);
    if (mag > prev) break;  // divergent tail
    prev = mag;
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      p += sgn * a;
    else
      q += sgn * a;
    if (mag < 1e-17) break;
  }
  const double chi = x - (0.5 * order + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// Bessel function of the first kind, order 0 or 1.
inline double bessel_j(int order, double x) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("bessel_j: order must be 0 or 1, got " + std::to_string(order));
  const double ax = std::fabs(x);
  const double v = ax <= kBesselSwitch ? detail::bessel_j_series(order, ax) : detail::bessel_j_asymptotic(order, ax);
  return (order == 1 && x < 0) ? -v : v;
}

/// Modified Bessel I0(s) = J0(is).
inline double bessel_i0(double s) {
  const double as = std::fabs(s);
  if (as <= 30.0) {
    const double h2 = 0.25 * as * as;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= h2 / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum;
  }
  double a = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * as);
    sum += a;
    if (a < 1e-17 * sum) break;
  }
  return std::exp(as) / std::sqrt(2.0 * std::numbers::pi * as) * sum;
}

/// H0^(1)(v) from the Hankel expansion; intended for |v| >= 30, |arg v| < pi/2.
inline std::complex<double> hankel1_0_asymptotic(std::complex<double> v) {
  using C = std::complex<double>;
  const C iu(0.0, 1.0);
  C term = 1.0, sum = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= iu * (-(2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * v);
    const double mag = std::abs(term);
    if (mag > prev) break;
    prev = mag;
    sum += term;
    if (mag < 1e-17) break;
  }
  return std::sqrt(2.0 / (std::numbers::pi * v)) * std::exp(iu * (v - 0.25 * std::numbers::pi)) * sum;
}

}  // namespace arcdet
