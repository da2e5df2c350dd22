#pragma once

// Monic orthogonal polynomials on [-1, 1]:
//   chebyshev1       w = 1/sqrt(1-x^2)
//   chebyshev2       w = sqrt(1-x^2)
//   legendre         w = 1
//   bernstein_szego  w = sqrt(1-x^2) / (1 - q x^2),  q = gamma^{2 r^2}
//
// Monic P_n decays like 2^{-n}, so the workhorse is the scaled value
// S_n(x) = 2^n P_n(x), which stays O(1..n) on [-1, 1] and near it.
// Norms are likewise available as 4^n h_n or as logarithms.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "arcdet/quadrature.hpp"

namespace arcdet {

enum class Family { chebyshev1, chebyshev2, legendre, bernstein_szego };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::chebyshev1: return "chebyshev1";
    case Family::chebyshev2: return "chebyshev2";
    case Family::legendre: return "legendre";
    case Family::bernstein_szego: return "bernstein_szego";
  }
  return "unknown";
}

struct PolyFamily {
  Family family = Family::legendre;
  double gamma = 1.0;  // bernstein_szego only
  double r = 0.0;      // bernstein_szego only

  static PolyFamily chebyshev1() { return {Family::chebyshev1}; }
  static PolyFamily chebyshev2() { return {Family::chebyshev2}; }
  static PolyFamily legendre() { return {Family::legendre}; }
  static PolyFamily bernstein_szego(double gamma, double r) {
    if (!(gamma > 0.0 && gamma <= 1.0))
      throw std::invalid_argument("bernstein_szego: gamma must lie in (0, 1], got " + std::to_string(gamma));
    if (!(r >= 0.0)) throw std::invalid_argument("bernstein_szego: r must be >= 0, got " + std::to_string(r));
    return {Family::bernstein_szego, gamma, r};
  }

  /// q = gamma^{2 r^2}
  double q() const { return std::exp(2.0 * r * r * std::log(gamma)); }
  /// 1 - q without cancellation
  double one_minus_q() const { return -std::expm1(2.0 * r * r * std::log(gamma)); }
  /// a = (1 - sqrt(1 - q)) / 2, in (0, 1/2]
  double a() const { return 0.5 * q() / (1.0 + std::sqrt(one_minus_q())); }

  /// w(x) given x and 1 - x^2 (the latter passed separately so callers can
  /// supply it without cancellation near the endpoints).
  double weight(double x, double one_minus_x2) const {
    switch (family) {
      case Family::chebyshev1: return 1.0 / std::sqrt(one_minus_x2);
      case Family::chebyshev2: return std::sqrt(one_minus_x2);
      case Family::legendre: return 1.0;
      case Family::bernstein_szego: return std::sqrt(one_minus_x2) / (1.0 - q() * x * x);
    }
    return 0.0;
  }
  double weight(double x) const { return weight(x, (1.0 - x) * (1.0 + x)); }

  /// w(cos psi) sin psi, smooth on [0, pi] for every family.
  double weight_times_sin(double psi) const {
    const double s = std::sin(psi);
    switch (family) {
      case Family::chebyshev1: return 1.0;
      case Family::chebyshev2: return s * s;
      case Family::legendre: return s;
      case Family::bernstein_szego: {
        const double c = std::cos(psi);
        // 1 - q c^2 = s^2 + (1 - q) c^2
        return s * s / (s * s + one_minus_q() * c * c);
      }
    }
    return 0.0;
  }
};

namespace detail {

// acosh(x) for x >= 1 without forming x^2 - 1 directly
inline double acosh_ge1(double x) {
  const double d = x - 1.0;
  return std::log1p(d + std::sqrt(d * (x + 1.0)));
}

// 2 T_n(x) for n >= 1 (= 2^n monic Chebyshev-1), any real x
inline double cheb_t2(int n, double x) {
  const double ax = std::fabs(x);
  double v;
  if (ax <= 1.0)
    v = 2.0 * std::cos(n * std::acos(ax));
  else
    v = 2.0 * std::cosh(n * acosh_ge1(ax));
  return (x < 0 && n % 2 == 1) ? -v : v;
}

// U_n(x) (= 2^n monic Chebyshev-2), any real x
inline double cheb_u(int n, double x) {
  const double ax = std::fabs(x);
  double v;
  if (ax < 1.0) {
    const double psi = std::acos(ax);
    v = std::sin((n + 1) * psi) / std::sin(psi);
  } else if (ax == 1.0) {
    v = n + 1.0;
  } else {
    const double t = acosh_ge1(ax);
    v = std::sinh((n + 1) * t) / std::sinh(t);
  }
  return (x < 0 && n % 2 == 1) ? -v : v;
}

}  // namespace detail

/// S_n(x) = 2^n P_n(x) for the monic family polynomial P_n.
inline double eval_monic_scaled(const PolyFamily& fam, int n, double x) {
  if (n < 0) throw std::invalid_argument("eval_monic: degree must be >= 0");
  if (n == 0) return 1.0;
  switch (fam.family) {
    case Family::chebyshev1: return detail::cheb_t2(n, x);
    case Family::chebyshev2: return detail::cheb_u(n, x);
    case Family::legendre: {
      // 2^k L_k obeys q_{k+1} = 2x q_k - 4k^2/(4k^2-1) q_{k-1}
      double q0 = 1.0, q1 = 2.0 * x;
      for (int k = 1; k < n; ++k) {
        const double q2 = 2.0 * x * q1 - (4.0 * k * k) / (4.0 * k * k - 1.0) * q0;
        q0 = q1;
        q1 = q2;
      }
      return q1;
    }
    case Family::bernstein_szego: {
      // monic form of the orthonormal Bernstein-Szego polynomial:
      // [(1 - 2a x^2) U_n + 2a x T_{n+1}] / (1 - a)
      const double a = fam.a();
      return ((1.0 - 2.0 * a * x * x) * detail::cheb_u(n, x) + a * x * detail::cheb_t2(n + 1, x)) / (1.0 - a);
    }
  }
  return 0.0;
}

/// S_0(x), ..., S_nmax(x) in one pass.
inline void eval_monic_scaled_all(const PolyFamily& fam, int nmax, double x, std::vector<double>& out) {
  out.resize(nmax + 1);
  out[0] = 1.0;
  if (nmax == 0) return;
  if (fam.family == Family::legendre) {
    out[1] = 2.0 * x;
    for (int k = 1; k < nmax; ++k) out[k + 1] = 2.0 * x * out[k] - (4.0 * k * k) / (4.0 * k * k - 1.0) * out[k - 1];
    return;
  }
  for (int k = 1; k <= nmax; ++k) out[k] = eval_monic_scaled(fam, k, x);
}

/// Monic value P_n(x). Underflows for n beyond ~1000; use the scaled or
/// log forms there.
inline double eval_monic(const PolyFamily& fam, int n, double x) {
  return std::ldexp(eval_monic_scaled(fam, n, x), -n);
}

/// ln|P_n(x)|, with the sign returned through `sign`.
inline double eval_monic_log(const PolyFamily& fam, int n, double x, int* sign = nullptr) {
  const double v = eval_monic_scaled(fam, n, x);
  if (sign) *sign = (v > 0) - (v < 0);
  return std::log(std::fabs(v)) - n * std::numbers::ln2;
}

/// ln h_n, h_n = int P_n^2 w dx.
inline double norm_h_log(const PolyFamily& fam, int n) {
  using std::numbers::ln2;
  using std::numbers::pi;
  if (n < 0) throw std::invalid_argument("norm_h: degree must be >= 0");
  switch (fam.family) {
    case Family::chebyshev1: return n == 0 ? std::log(pi) : std::log(pi) - (2.0 * n - 1.0) * ln2;
    case Family::chebyshev2: return std::log(pi) - (2.0 * n + 1.0) * ln2;
    case Family::legendre: {
      // 2^{2n+1} / ((2n+1) C(2n,n)^2), binomial via lgamma
      const double log_binom = std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0);
      return (2.0 * n + 1.0) * ln2 - std::log(2.0 * n + 1.0) - 2.0 * log_binom;
    }
    case Family::bernstein_szego: {
      // h_n = kappa_n^{-2}; kappa_0^2 = 2(1-a)/pi, kappa_n^2 = (2/pi) 4^n (1-a)^2
      const double one_minus_a = 1.0 - fam.a();
      if (n == 0) return std::log(pi) - std::log(2.0 * one_minus_a);
      return std::log(pi) - ln2 - 2.0 * n * ln2 - 2.0 * std::log(one_minus_a);
    }
  }
  return 0.0;
}

inline double norm_h(const PolyFamily& fam, int n) { return std::exp(norm_h_log(fam, n)); }

/// 4^n h_n, the norm matching S_n.
inline double norm_h_scaled(const PolyFamily& fam, int n) {
  return std::exp(norm_h_log(fam, n) + 2.0 * n * std::numbers::ln2);
}

/// w(x) divided by the weight function of a quadrature kind, written out
/// per pair so the endpoint factors cancel exactly.
inline double weight_over_rule(const PolyFamily& fam, QuadratureKind kind, double x) {
  const double omx2 = (1.0 - x) * (1.0 + x);
  switch (kind) {
    case QuadratureKind::gauss_legendre: return fam.weight(x, omx2);
    case QuadratureKind::gauss_chebyshev_1:
      switch (fam.family) {
        case Family::chebyshev1: return 1.0;
        case Family::chebyshev2: return omx2;
        case Family::legendre: return std::sqrt(omx2);
        case Family::bernstein_szego: return omx2 / (1.0 - fam.q() * x * x);
      }
      break;
    case QuadratureKind::gauss_chebyshev_2:
      switch (fam.family) {
        case Family::chebyshev1: return 1.0 / omx2;
        case Family::chebyshev2: return 1.0;
        case Family::legendre: return 1.0 / std::sqrt(omx2);
        case Family::bernstein_szego: return 1.0 / (1.0 - fam.q() * x * x);
      }
      break;
  }
  return 0.0;
}

/// The rule kind that removes the endpoint behaviour of the family weight.
inline QuadratureKind matched_rule_kind(const PolyFamily& fam) {
  switch (fam.family) {
    case Family::chebyshev1: return QuadratureKind::gauss_chebyshev_1;
    case Family::chebyshev2:
    case Family::bernstein_szego: return QuadratureKind::gauss_chebyshev_2;
    case Family::legendre: return QuadratureKind::gauss_legendre;
  }
  return QuadratureKind::gauss_legendre;
}

/// max_{m,n <= nmax} | int P_n P_m w / sqrt(h_n h_m) - delta_nm | under `rule`.
/// A rule too small for nmax just reports a larger defect.
inline double orthonormality_defect(const PolyFamily& fam, int nmax, const QuadratureRule& rule) {
  std::vector<std::vector<double>> vals(rule.size());
  std::vector<double> ratio(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    eval_monic_scaled_all(fam, nmax, rule.nodes[j], vals[j]);
    ratio[j] = weight_over_rule(fam, rule.kind, rule.nodes[j]);
  }
  std::vector<double> hs(nmax + 1);
  for (int n = 0; n <= nmax; ++n) hs[n] = norm_h_scaled(fam, n);
  double worst = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    for (int m = 0; m <= n; ++m) {
      double acc = 0.0;
      for (std::size_t j = 0; j < rule.size(); ++j) acc += rule.weights[j] * ratio[j] * vals[j][n] * vals[j][m];
      acc /= std::sqrt(hs[n] * hs[m]);
      worst = std::max(worst, std::fabs(acc - (n == m ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace arcdet
