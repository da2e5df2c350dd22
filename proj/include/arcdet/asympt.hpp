#pragma once

// Exact finite-n arc determinants for the Legendre weights and their
// large-n asymptotics at alpha = 2s/n (gamma = cos(s/n)):
//
//   D_{n-1}(f1) = 2^{n^2-n} gamma^{n^2+n} pi^{-n} A_n L_n(1/gamma)
//   D_{n-1}(f2) = (2 gamma)^{(n-1)n} t_{n-1} pi^{-(n-1)} A_{n-1}
//   A_n = prod_{j<n} 4^j / ((j + 1/2) binom(2j, j)^2)
//
//   D_{n-1}(f1) ~ 2^{-n}  n^{1/4} sqrt(pi) W e^{-s^2/2} I_0(s)
//   D_{n-1}(f2) ~ 2^{n-1} n^{1/4} sqrt(pi) W e^{-s^2/2} F(s)
//   F(s) = (1/pi) int_0^inf cos(sqrt(x + s^2)) / (x + s^2) J_0(sqrt x) dx
//
// with W = 2^{1/12} e^{3 zeta'(-1)}. Everything stays in log form until a
// ratio is taken.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "arcdet/arcmap.hpp"
#include "arcdet/bessel.hpp"
#include "arcdet/constants.hpp"
#include "arcdet/log_signed.hpp"
#include "arcdet/memo.hpp"
#include "arcdet/polybase.hpp"
#include "arcdet/quadrature.hpp"

namespace arcdet {

enum class LegendreArc { f1, f2 };

inline std::string to_string(LegendreArc f) { return f == LegendreArc::f1 ? "f1" : "f2"; }

/// A_n, n >= 0 (A_0 = 1); consecutive factors differ by (j+1)^2 / ((2j+1)(2j+3)).
inline LogSigned a_n_product(int n) {
  if (n < 0) throw std::invalid_argument("a_n_product: n must be >= 0");
  double log_a = 0.0, log_term = std::log(2.0);
  for (int j = 0; j < n; ++j) {
    log_a += log_term;
    log_term += 2.0 * std::log(j + 1.0) - std::log(2.0 * j + 1.0) - std::log(2.0 * j + 3.0);
  }
  return LogSigned::from_log(log_a);
}

/// log of W n^{-1/4} (2 pi)^n 2^{-n^2}.
inline double a_n_asymptotic_log(int n) {
  const double N = n;
  return std::log(widom_constant()) - 0.25 * std::log(N) + N * std::log(2 * std::numbers::pi) - N * N * std::log(2.0);
}

/// 2^n L_n(1/gamma) / sqrt(pi n) with gamma = cos(s/n); tends to I_0(s).
inline double hilb_ratio(int n, double s) {
  if (n < 1) throw std::invalid_argument("hilb_ratio: n must be >= 1");
  const double y = 1.0 / std::cos(s / n);
  return eval_monic_scaled(PolyFamily::legendre(), n, y) / std::sqrt(std::numbers::pi * n);
}

namespace detail {

inline void check_scaling(int n, double s, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
  if (!(s > 0.0)) throw std::invalid_argument(std::string(who) + ": s must be > 0");
  if (!(2.0 * s / n < std::numbers::pi)) throw std::invalid_argument(std::string(who) + ": need s/n < pi/2");
}

}  // namespace detail

/// Arc weight whose determinant dn_exact(family, n, s) is: alpha = 2s/n.
inline ArcWeight legendre_arc_weight(LegendreArc family, int n, double s) {
  return family == LegendreArc::f1 ? ArcWeight::f1(2.0 * s / n) : ArcWeight::f2(2.0 * s / n);
}

/// D_{n-1}(f) for f1 / f2 at gamma = cos(s/n).
inline LogSigned dn_exact(LegendreArc family, int n, double s) {
  detail::check_scaling(n, s, "dn_exact");
  using std::numbers::ln2;
  const double N = n, lg = std::log(std::cos(s / n)), lpi = std::log(std::numbers::pi);
  if (family == LegendreArc::f1) {
    // L_n = 2^{-n} (2^n L_n)
    const double ln_l = std::log(eval_monic_scaled(PolyFamily::legendre(), n, 1.0 / std::cos(s / n))) - N * ln2;
    const double lm = (N * N - N) * ln2 + (N * N + N) * lg - N * lpi + a_n_product(n).logmag + ln_l;
    return LogSigned::from_log(lm);
  }
  const auto fw = legendre_arc_weight(family, n, s);
  const double k = n - 1;
  const double ln_t = log_tau_coeff(fw, n - 1) - k * ln2;  // t_k = tau_k / 2^k
  const double lm = k * N * (ln2 + lg) + ln_t - k * lpi + a_n_product(n - 1).logmag;
  return LogSigned::from_log(lm);
}

namespace detail {

// (2/pi) int_s^U cos(u)/u J_0(sqrt(u^2 - s^2)) du on unit panels
inline double f_cap_finite(double s, double U) {
  const QuadratureRule& rule = gauss_legendre(20);
  const int panels = static_cast<int>(std::ceil(U - s));
  const auto g = [s](double u) {
    const double v2 = (u - s) * (u + s);
    return std::cos(u) / u * bessel_j(0, std::sqrt(std::max(v2, 0.0)));
  };
  double acc = 0.0;
  for (int j = 0; j < panels; ++j) acc += integrate(rule, s + (U - s) * j / panels, s + (U - s) * (j + 1) / panels, g);
  return acc;
}

// Tail beyond U: cos(u) J_0(v) = (1/2) Re[e^{iu} H(v)] + (1/2) Re[e^{-iu} H(v)],
// H = H_0^(1), v = sqrt(u^2 - s^2). The first term oscillates like e^{2iu}
// and is taken up the ray u = U + iy. The second has phase v - u -> 0 and
// decays like u^{-3/2}; it is taken over u = U / x^2, x in (0, 1].
inline double f_cap_tail(double s, double U) {
  using C = std::complex<double>;
  const QuadratureRule& rule = gauss_legendre(20);
  const C iu(0.0, 1.0);
  const auto vof = [s](C u) { return std::sqrt((u - s) * (u + s)); };

  const auto fast = [&](double y) {
    const C u(U, y);
    return (std::exp(iu * u) * hankel1_0_asymptotic(vof(u)) / u * iu).real();
  };
  double fast_acc = 0.0;
  for (int j = 0; j < 40; ++j) fast_acc += integrate(rule, 0.5 * j, 0.5 * (j + 1), fast);

  const auto slow = [&](double x) {
    if (x == 0.0) return 0.0;
    const double u = U / (x * x);
    const C val = std::exp(-iu * u) * hankel1_0_asymptotic(vof(C(u, 0.0))) / u;
    return val.real() * 2.0 * U / (x * x * x);
  };
  double slow_acc = 0.0;
  for (int j = 0; j < 8; ++j) slow_acc += integrate(rule, j / 8.0, (j + 1) / 8.0, slow);
  return 0.5 * (fast_acc + slow_acc);
}

inline MemoTable<double, double>& f_cap_memo() {
  static MemoTable<double, double> t;
  return t;
}

}  // namespace detail

/// F(s) = (2/pi) int_s^inf cos(u)/u J_0(sqrt(u^2 - s^2)) du, s > 0.
inline double f_cap(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("f_cap: s must be > 0");
  return detail::f_cap_memo().get(s, [s] {
    const double U = std::ceil(s) + 60.0;
    return 2.0 / std::numbers::pi * (detail::f_cap_finite(s, U) + detail::f_cap_tail(s, U));
  });
}

/// Leading large-n form of dn_exact.
inline LogSigned dn_asymptotic(LegendreArc family, int n, double s) {
  detail::check_scaling(n, s, "dn_asymptotic");
  using std::numbers::ln2;
  const double N = n;
  const double common =
      0.25 * std::log(N) + 0.5 * std::log(std::numbers::pi) + std::log(widom_constant()) - 0.5 * s * s;
  if (family == LegendreArc::f1) return LogSigned::from_log(common - N * ln2 + std::log(bessel_i0(s)));
  const double F = f_cap(s);
  if (F == 0.0) return LogSigned::zero();
  return LogSigned::from_log(common + (N - 1) * ln2 + std::log(std::fabs(F)), F > 0 ? 1 : -1);
}

struct AsymptoticReport {
  LegendreArc family = LegendreArc::f1;
  int n = 0;
  double s = 0.0;
  LogSigned exact_logdet;
  LogSigned asymptotic_logdet;
  double ratio = 0.0;  // exact / asymptotic
};

inline std::vector<AsymptoticReport> asymptotic_report(LegendreArc family, double s, std::vector<int> n_list) {
  std::sort(n_list.begin(), n_list.end());
  std::vector<AsymptoticReport> rows;
  for (int n : n_list) {
    AsymptoticReport row{family, n, s, dn_exact(family, n, s), dn_asymptotic(family, n, s), 0.0};
    row.ratio = (row.exact_logdet / row.asymptotic_logdet).to_real();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace arcdet
