#pragma once

// Orthogonal polynomials on the arc {e^{i theta}: alpha <= theta <= 2 pi - alpha}
// built from polynomials on [-1, 1].
//
// With gamma = cos(alpha/2) and x = cos(theta/2)/gamma, an interval weight w
// gives the arc weight f(theta) = w(x) sin(theta/2). Two constructions exist:
//   P-form: P_n orthogonal for w itself.
//   Q-form: Q_n orthogonal for w(x)(1 - gamma^2 x^2); needs the moments t_k.
//
// Every integral against f is done in psi, x = cos psi, where
//   (1/2pi) int g(theta) f(theta) dtheta = (gamma/pi) int_0^pi g(theta(psi)) w(cos psi) sin psi dpsi,
//   theta(psi) = 2 acos(gamma cos psi).
// Polynomials are handled in the scaled form S_k = 2^k P_k (see polybase.hpp),
// so the moments are stored as tau_k = 2^k t_k. The Q-form constructions use
// tau_k from a three-term recurrence; the psi-quadrature value is kept as the
// independent check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "arcdet/log_signed.hpp"
#include "arcdet/memo.hpp"
#include "arcdet/polybase.hpp"
#include "arcdet/quadrature.hpp"

namespace arcdet {

/// Lemma-style construction preconditions failed: P_n(1/gamma) = 0 or t_{n-1} = 0.
class DegenerateFamilyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class ArcForm { p_form, q_form };
enum class NamedArc { none, f0, f1, f2 };

inline std::string to_string(ArcForm f) { return f == ArcForm::p_form ? "P" : "Q"; }

struct ArcWeight {
  double alpha = 0.0;
  double gamma = 1.0;
  PolyFamily base = PolyFamily::legendre();
  ArcForm form = ArcForm::p_form;
  NamedArc named = NamedArc::none;

  /// f = w(x) sin(theta/2) with w the weight of `base`.
  static ArcWeight p_form(const PolyFamily& base, double alpha) { return make(base, alpha, ArcForm::p_form); }
  /// f = w(x) sin(theta/2) with w(x)(1 - gamma^2 x^2) the weight of `base`.
  static ArcWeight q_form(const PolyFamily& base, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("q_form arc weight needs alpha > 0");
    return make(base, alpha, ArcForm::q_form);
  }
  /// Bernstein-Szego P-form with the family's gamma tied to the arc.
  static ArcWeight bernstein_szego(double alpha, double r) {
    check_alpha(alpha);
    return p_form(PolyFamily::bernstein_szego(std::cos(alpha / 2.0), r), alpha);
  }
  /// Indicator of the arc. Has no interval family; Toeplitz use only.
  static ArcWeight f0(double alpha) {
    auto w = make(PolyFamily::legendre(), alpha, ArcForm::p_form);
    w.named = NamedArc::f0;
    return w;
  }
  /// sin(theta/2) on the arc: Legendre P-form.
  static ArcWeight f1(double alpha) {
    auto w = p_form(PolyFamily::legendre(), alpha);
    w.named = NamedArc::f1;
    return w;
  }
  /// 1/sin(theta/2) on the arc: Legendre Q-form.
  static ArcWeight f2(double alpha) {
    auto w = q_form(PolyFamily::legendre(), alpha);
    w.named = NamedArc::f2;
    return w;
  }

  bool has_family() const { return named != NamedArc::f0; }

  /// w(cos psi) sin psi, the weight of the psi-variable integrals.
  double psi_weight(double psi) const {
    const double s = std::sin(psi), c = std::cos(psi);
    // 1 - gamma^2 cos^2 psi, cancellation-free
    const double d = s * s + one_minus_gamma2() * c * c;
    if (named == NamedArc::f0) return s / std::sqrt(d);
    const double base_part = base.weight_times_sin(psi);
    return form == ArcForm::p_form ? base_part : base_part / d;
  }

  /// 1 - gamma^2 = sin^2(alpha/2)
  double one_minus_gamma2() const {
    const double h = std::sin(alpha / 2.0);
    return h * h;
  }

  /// Smallest length scale of psi_weight near psi = 0 and pi (0 if none).
  double endpoint_scale() const {
    double d = 0.0;
    auto take = [&d](double v) {
      if (v > 0.0) d = (d == 0.0) ? v : std::min(d, v);
    };
    if (named == NamedArc::f0 || form == ArcForm::q_form) take(std::sin(alpha / 2.0));
    if (base.family == Family::bernstein_szego && named != NamedArc::f0) take(std::sqrt(base.one_minus_q()));
    return d;
  }

  /// Identity used as a cache key.
  auto key() const {
    return std::make_tuple(alpha, static_cast<int>(form), static_cast<int>(named), static_cast<int>(base.family),
                           base.gamma, base.r);
  }

 private:
  static void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha < std::numbers::pi))
      throw std::invalid_argument("arc weight: alpha must lie in [0, pi), got " + std::to_string(alpha));
  }
  static ArcWeight make(const PolyFamily& base, double alpha, ArcForm form) {
    check_alpha(alpha);
    ArcWeight w;
    w.alpha = alpha;
    w.gamma = std::cos(alpha / 2.0);
    w.base = base;
    w.form = form;
    return w;
  }
};

/// f(theta); theta is reduced mod 2 pi, zero off the arc.
inline double arc_weight_eval(const ArcWeight& fw, double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  if (theta < 0.0) theta += two_pi;
  if (theta < fw.alpha || theta > two_pi - fw.alpha) return 0.0;
  const double half = theta / 2.0;
  const double sh = std::sin(half);
  switch (fw.named) {
    case NamedArc::f0: return 1.0;
    case NamedArc::f1: return sh;
    case NamedArc::f2: return 1.0 / sh;
    case NamedArc::none: break;
  }
  const double g = fw.gamma;
  const double x = std::cos(half) / g;
  // 1 - x^2 = (cos(alpha/2) - cos(theta/2)) (cos(alpha/2) + cos(theta/2)) / gamma^2
  const double diff = 2.0 * std::sin((theta + fw.alpha) / 4.0) * std::sin((theta - fw.alpha) / 4.0);
  const double omx2 = std::max(0.0, diff * (g + std::cos(half)) / (g * g));
  const double w = fw.base.weight(x, omx2);
  if (fw.form == ArcForm::p_form) return w * sh;
  return w / sh;  // w_Q / (1 - gamma^2 x^2) * sin = w_Q / sin
}

namespace detail {

/// theta/2 = acos(gamma cos psi), accurate when gamma is near 1 and psi near 0.
inline double half_theta(double gamma, double one_minus_gamma2, double psi) {
  const double s = std::sin(psi), c = std::cos(psi);
  return std::atan2(std::sqrt(s * s + one_minus_gamma2 * c * c), gamma * c);
}

constexpr int kPanelNodes = 20;

/// Panel breakpoints on [0, pi]: geometric grading toward both ends at the
/// weight's length scale, then splits so that each panel carries at most a
/// phase of 3 at angular frequency `freq`, with at least `min_nodes` total.
inline std::vector<double> psi_breaks(double scale, double freq, int min_nodes) {
  constexpr double pi = std::numbers::pi;
  std::vector<double> coarse{0.0};
  if (scale > 0.0 && scale < 0.5) {
    for (double b = scale; b < 0.5; b *= 2.0) coarse.push_back(b);
  }
  const std::size_t left = coarse.size();
  std::vector<double> breaks(coarse.begin(), coarse.end());
  for (std::size_t i = left; i-- > 1;) breaks.push_back(pi - coarse[i]);
  breaks.push_back(pi);
  std::sort(breaks.begin(), breaks.end());

  const double max_len = std::min(3.0 / std::max(freq, 1e-300), pi / std::max(1, min_nodes / kPanelNodes));
  std::vector<double> out{breaks.front()};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
    for (int p = 1; p <= pieces; ++p) out.push_back(p == pieces ? b : a + (b - a) * p / pieces);
  }
  return out;
}

}  // namespace detail

/// Default node budget for index k.
inline int default_nodes(int k) { return 4 * std::abs(k) + 200; }

/// (1/2pi) int g(theta) f(theta) dtheta over the arc, for g given as a
/// function of psi. `freq` bounds the angular frequency of g in psi.
template <class G>
auto arc_integral_psi(const ArcWeight& fw, double freq, int min_nodes, G&& g) -> decltype(g(0.0)) {
  const auto breaks = detail::psi_breaks(fw.endpoint_scale(), freq, min_nodes);
  const auto& rule = gauss_legendre(detail::kPanelNodes);
  auto integrand = [&](double psi) { return g(psi) * fw.psi_weight(psi); };
  return (fw.gamma / std::numbers::pi) * integrate_panels(rule, breaks, integrand);
}

/// (1/2pi) int g(theta) f(theta) dtheta for g given as a function of theta.
template <class G>
auto arc_integral(const ArcWeight& fw, double freq, int min_nodes, G&& g) -> decltype(g(0.0)) {
  const double omg2 = fw.one_minus_gamma2();
  return arc_integral_psi(fw, freq, min_nodes,
                          [&](double psi) { return g(2.0 * detail::half_theta(fw.gamma, omg2, psi)); });
}

namespace detail {

inline void require_family(const ArcWeight& fw) {
  if (!fw.has_family()) throw std::invalid_argument("arc weight f0 has no polynomial family");
}

using WeightKey = decltype(ArcWeight{}.key());

// quadrature tau_k by (weight, k, nodes)
inline MemoTable<std::tuple<WeightKey, int, int>, double>& tau_quadrature_memo() {
  static MemoTable<std::tuple<WeightKey, int, int>, double> t;
  return t;
}

// Second-kind sequence of a Q-form weight: ratios r_k = tau_k / tau_{k-1}
// (index 0 unused) and log tau_k, for k <= kmax.
struct TauSequence {
  std::vector<double> ratio;
  std::vector<double> log_tau;
};

// With y = 1/gamma, splitting T_k(gamma x) / (1 - gamma^2 x^2) into a
// polynomial of degree k-2 plus a simple-pole part gives
//   pi tau_k = q_k(y) = int S_k(x) w_Q(x) / (y - x) dx,
// the function of the second kind. It obeys the monic recurrence
// q_{k+1} = 2y q_k - 4 beta_k q_{k-1} for k >= 1 (beta_k = h_k / h_{k-1}) and
// decays like rho^{-k}, so it is the minimal solution: ratios come from the
// backward continued fraction. tau_0 is the plain mean of f.
inline TauSequence tau_sequence_compute(const ArcWeight& fw, int kmax) {
  const double y = 1.0 / fw.gamma;
  const double log_rho = acosh_ge1(y);
  // tail error of the fraction ~ rho^{-2 (K - k)}
  const long extra = static_cast<long>(std::ceil(20.0 / std::max(log_rho, 1e-7))) + 20;
  const long K = kmax + std::min<long>(extra, 50'000'000L);
  // 4 beta_k = h~_k / h~_{k-1}; for every non-Legendre family it is 1 from k = 2 on
  auto four_beta = [&](long k) -> double {
    if (fw.base.family == Family::legendre) {
      const double kk = static_cast<double>(k) * k;
      return 4.0 * kk / (4.0 * kk - 1.0);
    }
    if (k >= 2) return 1.0;
    return std::exp(norm_h_log(fw.base, 1) - norm_h_log(fw.base, 0) + 2.0 * std::numbers::ln2);
  };
  TauSequence seq;
  seq.ratio.assign(kmax + 2, 0.0);
  double r = 0.0;
  for (long k = K; k >= 1; --k) {
    const double fb = four_beta(k);
    r = fb / (2.0 * y - r);
    if (k <= kmax + 1) seq.ratio[k] = r;
  }
  // tau_0 has a positive integrand, so quadrature is exact to rounding; the
  // closed route h_0 / (y - r_1/2) cancels when gamma -> 1
  const double tau0 = arc_integral_psi(fw, 1.0, default_nodes(0), [](double) { return 1.0; });
  seq.log_tau.resize(kmax + 1);
  seq.log_tau[0] = std::log(tau0);
  for (int k = 1; k <= kmax; ++k) seq.log_tau[k] = seq.log_tau[k - 1] + std::log(seq.ratio[k]);
  seq.ratio.resize(kmax + 1);
  return seq;
}

class TauSequenceCache {
 public:
  using Key = decltype(ArcWeight{}.key());
  static TauSequenceCache& instance() {
    static TauSequenceCache c;
    return c;
  }
  // Returns a sequence covering at least kmax.
  TauSequence get(const ArcWeight& fw, int kmax) {
    std::lock_guard lock(mu_);
    auto& slot = map_[fw.key()];
    if (static_cast<int>(slot.log_tau.size()) <= kmax) slot = tau_sequence_compute(fw, std::max(kmax, 64));
    return slot;
  }
  // Single entries without copying the vectors.
  std::pair<double, double> ratio_and_log(const ArcWeight& fw, int k) {
    std::lock_guard lock(mu_);
    auto& slot = map_[fw.key()];
    if (static_cast<int>(slot.log_tau.size()) <= k) slot = tau_sequence_compute(fw, std::max(2 * k, 64));
    return {slot.ratio[k], slot.log_tau[k]};
  }

 private:
  std::mutex mu_;
  std::map<Key, TauSequence> map_;
};

inline void require_q_form(const ArcWeight& fw, int k) {
  require_family(fw);
  if (fw.form != ArcForm::q_form) throw std::invalid_argument("t_coeff needs a Q-form arc weight");
  if (k < 0) throw std::invalid_argument("t_coeff: k must be >= 0");
}

}  // namespace detail

/// tau_k = 2^k t_k for a Q-form weight by psi-quadrature,
///   t_k = (1/2pi) int z^{k/2} Q_k(x) f dtheta = (gamma/pi) int_0^pi cos(k acos(gamma cos psi)) Q_k(cos psi) w sin psi dpsi.
/// The integrand is O(1) while tau_k can decay geometrically for wide gaps,
/// so the relative error is ~ eps / tau_k.
inline double tau_coeff_quadrature(const ArcWeight& fw, int k, int m = -1) {
  detail::require_q_form(fw, k);
  if (m < 0) m = default_nodes(k);
  return detail::tau_quadrature_memo().get({fw.key(), k, m}, [&] {
    const double omg2 = fw.one_minus_gamma2();
    return arc_integral_psi(fw, 2.0 * k + 1.0, m, [&](double psi) {
      return std::cos(k * detail::half_theta(fw.gamma, omg2, psi)) * eval_monic_scaled(fw.base, k, std::cos(psi));
    });
  });
}

/// ln tau_k from the second-kind recurrence; full relative accuracy for every gap.
inline double log_tau_coeff(const ArcWeight& fw, int k) {
  detail::require_q_form(fw, k);
  return detail::TauSequenceCache::instance().ratio_and_log(fw, k).second;
}

/// tau_k = 2^k t_k from the second-kind recurrence.
inline double tau_coeff(const ArcWeight& fw, int k) { return std::exp(log_tau_coeff(fw, k)); }

/// t_k. With m < 0 the recurrence value, otherwise psi-quadrature on m nodes.
/// Underflows for k beyond ~1000; use log_tau_coeff there.
inline double t_coeff(const ArcWeight& fw, int k, int m = -1) {
  return std::ldexp(m < 0 ? tau_coeff(fw, k) : tau_coeff_quadrature(fw, k, m), -k);
}

namespace detail {

// S_{n+1}(1/gamma) / S_n(1/gamma)
inline double p_ratio(const ArcWeight& fw, int n) {
  const double x = 1.0 / fw.gamma;
  const double den = eval_monic_scaled(fw.base, n, x);
  if (den == 0.0) throw DegenerateFamilyError("P_n(1/gamma) = 0 at n = " + std::to_string(n));
  return eval_monic_scaled(fw.base, n + 1, x) / den;
}

// tau_n / tau_{n-1}
inline double q_ratio(const ArcWeight& fw, int n) {
  require_q_form(fw, n);
  const double r = TauSequenceCache::instance().ratio_and_log(fw, n).first;
  if (!std::isfinite(r) || r == 0.0) throw DegenerateFamilyError("t_{n-1} = 0 at n = " + std::to_string(n));
  return r;
}

// e^{i theta/2} with theta in [0, 2pi)
inline std::complex<double> sqrt_branch(std::complex<double> z) {
  double th = std::arg(z);
  if (th < 0.0) th += 2.0 * std::numbers::pi;
  return std::polar(1.0, th / 2.0);
}

inline std::complex<double> phi_p_raw(const ArcWeight& fw, int n, double theta, double rho) {
  const std::complex<double> h = std::polar(1.0, theta / 2.0);
  const double x = std::cos(theta / 2.0) / fw.gamma;
  const double s1 = eval_monic_scaled(fw.base, n + 1, x), s0 = eval_monic_scaled(fw.base, n, x);
  // (z - 1) = h * 2i sin(theta/2)
  const std::complex<double> denom(0.0, 2.0 * std::sin(theta / 2.0));
  return std::pow(fw.gamma, n + 1) * std::pow(h, n - 1) * (h * s1 - rho * s0) / denom;
}

}  // namespace detail

/// Phi_n(z) from the P-form. Only arg z is used; z = 1 is filled by the limit.
inline std::complex<double> phi_from_P(const ArcWeight& fw, int n, std::complex<double> z) {
  detail::require_family(fw);
  if (fw.form != ArcForm::p_form) throw std::invalid_argument("phi_from_P needs a P-form arc weight");
  if (n < 0) throw std::invalid_argument("phi_from_P: n must be >= 0");
  if (n == 0) return 1.0;
  const double rho = detail::p_ratio(fw, n);
  const auto h = detail::sqrt_branch(z);
  const double theta = 2.0 * std::arg(h);
  if (std::abs(z / std::abs(z) - 1.0) >= 1e-6) return detail::phi_p_raw(fw, n, theta, rho);
  // removable singularity: symmetric Richardson in theta around the point
  const double t0 = theta > std::numbers::pi ? theta - 2.0 * std::numbers::pi : theta;
  constexpr double d = 1e-3;
  auto sym = [&](double t) {
    return 0.5 * (detail::phi_p_raw(fw, n, t0 + t, rho) + detail::phi_p_raw(fw, n, t0 - t, rho));
  };
  return (4.0 * sym(d) - sym(2.0 * d)) / 3.0;
}

/// Phi_n(z) from the Q-form.
inline std::complex<double> phi_from_Q(const ArcWeight& fw, int n, std::complex<double> z) {
  detail::require_family(fw);
  if (fw.form != ArcForm::q_form) throw std::invalid_argument("phi_from_Q needs a Q-form arc weight");
  if (n < 0) throw std::invalid_argument("phi_from_Q: n must be >= 0");
  if (n == 0) return 1.0;
  const double ratio = detail::q_ratio(fw, n);
  const auto h = detail::sqrt_branch(z);
  const double x = h.real() / fw.gamma;
  return std::pow(fw.gamma, n) * std::pow(h, n) *
         (eval_monic_scaled(fw.base, n, x) - ratio * eval_monic_scaled(fw.base, n - 1, x) / h);
}

/// Phi_n(z) by whichever form the weight carries.
inline std::complex<double> phi_eval(const ArcWeight& fw, int n, std::complex<double> z) {
  return fw.form == ArcForm::p_form ? phi_from_P(fw, n, z) : phi_from_Q(fw, n, z);
}

/// a_{n-1} = -Phi_n(0), n >= 1.
inline double verblunsky(const ArcWeight& fw, int n) {
  detail::require_family(fw);
  if (n < 1) throw std::invalid_argument("verblunsky: n must be >= 1");
  if (fw.form == ArcForm::p_form) return 1.0 - fw.gamma * detail::p_ratio(fw, n);
  return fw.gamma * detail::q_ratio(fw, n) - 1.0;
}

/// chi_n^{-2}, the squared norm of Phi_n.
inline LogSigned chi_sq_inv(const ArcWeight& fw, int n) {
  using std::numbers::ln2;
  detail::require_family(fw);
  if (n < 0) throw std::invalid_argument("chi_sq_inv: n must be >= 0");
  const double lpi = std::log(std::numbers::pi), lg = std::log(fw.gamma);
  if (fw.form == ArcForm::p_form) {
    const double rho = detail::p_ratio(fw, n);
    if (rho <= 0.0) throw DegenerateFamilyError("P-form norm ratio not positive at n = " + std::to_string(n));
    return LogSigned::from_log(2.0 * n * ln2 + (2.0 * n + 2.0) * lg - lpi + std::log(rho) - ln2 +
                               norm_h_log(fw.base, n));
  }
  if (n == 0) return LogSigned::from_log(log_tau_coeff(fw, 0));
  const double ratio = detail::q_ratio(fw, n);
  if (ratio <= 0.0) throw DegenerateFamilyError("Q-form norm ratio not positive at n = " + std::to_string(n));
  return LogSigned::from_log(2.0 * n * (ln2 + lg) + std::log(ratio) - ln2 - lpi + norm_h_log(fw.base, n - 1));
}

/// Monic circle polynomial with real coefficients c_0..c_n.
struct CirclePoly {
  int n = 0;
  std::vector<double> coefficients;
  LogSigned chi_sq_inv;

  std::complex<double> operator()(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (int k = n; k >= 0; --k) acc = acc * z + coefficients[k];
    return acc;
  }
};

/// Coefficients of Phi_n by a DFT on 2(n+1) circle points offset by half a
/// step (z = 1 is never sampled). Throws if the imaginary parts exceed
/// 1e-10 of the coefficient scale.
inline CirclePoly extract_circle_poly(const ArcWeight& fw, int n) {
  const int N = 2 * (n + 1);
  std::vector<std::complex<double>> vals(N);
  for (int j = 0; j < N; ++j) vals[j] = phi_eval(fw, n, std::polar(1.0, std::numbers::pi * (2.0 * j + 1.0) / N));
  CirclePoly p;
  p.n = n;
  p.coefficients.resize(n + 1);
  double scale = 0.0, worst_imag = 0.0;
  for (int k = 0; k <= n; ++k) {
    std::complex<double> c = 0.0;
    for (int j = 0; j < N; ++j) c += vals[j] * std::polar(1.0, -std::numbers::pi * k * (2.0 * j + 1.0) / N);
    c /= static_cast<double>(N);
    p.coefficients[k] = c.real();
    scale = std::max(scale, std::abs(c));
    worst_imag = std::max(worst_imag, std::fabs(c.imag()));
  }
  if (worst_imag > 1e-10 * std::max(1.0, scale))
    throw std::runtime_error("extract_circle_poly: coefficients not real, max imag " + std::to_string(worst_imag));
  p.chi_sq_inv = chi_sq_inv(fw, n);
  return p;
}

}  // namespace arcdet
