#pragma once

// Convolution kernels on the line:
//
//   sine            sin z / (pi z)
//   chebyshev_kc    sin z/(pi z) - (1/pi) int_0^inf cos(z cosh t) e^{-t} dt
//   bernstein_szego sin z/(pi z) - (1/pi) int_0^inf cos(z cosh t) g_r(t) dt,
//                   g_r(t) = (sinh t cosh t / (sinh^2 t + r^2) - 1) sinh t
//
// plus the two alternative forms of the Bernstein-Szego kernel
//
//   sine_form   (1/(pi z)) int_0^inf sin(z cosh t)
//                 (r^2 cosh^2 t + (r^2 - 1) sinh^2 t) / (sinh^2 t + r^2)^2 dt,  r > 0
//   bessel_form (1/2) int_{|z|}^inf J_1(t)/t dt,                               r = 1
//
// The cosh-type integrals are taken in u = cosh t and the contour [1, inf)
// is turned onto the ray u = 1 + i v^2. The integrands are O(u^-2) and
// analytic to the right of Re u = 1 (branch points at u = +-1, poles at
// u^2 = 1 - r^2), so the ray carries the whole integral and e^{izu}
// decays like e^{-z v^2} instead of oscillating.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "arcdet/bessel.hpp"
#include "arcdet/quadrature.hpp"

namespace arcdet {

enum class KernelKind { zero, sine, chebyshev_kc, bernstein_szego };
enum class KernelRep { automatic, cosh_form, sine_form, bessel_form };

inline std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::zero: return "zero";
    case KernelKind::sine: return "sine";
    case KernelKind::chebyshev_kc: return "chebyshev_kc";
    case KernelKind::bernstein_szego: return "bernstein_szego";
  }
  return "unknown";
}

inline std::string to_string(KernelRep r) {
  switch (r) {
    case KernelRep::automatic: return "auto";
    case KernelRep::cosh_form: return "cosh_form";
    case KernelRep::sine_form: return "sine_form";
    case KernelRep::bessel_form: return "bessel_form";
  }
  return "unknown";
}

struct KernelSpec {
  KernelKind kind = KernelKind::sine;
  double r = 0.0;
  KernelRep rep = KernelRep::automatic;
  // Ray cut where e^{-z v^2} drops below e^{-tail_cutoff}; beyond it the
  // remaining ray is mapped onto a finite interval only when needed.
  double tail_cutoff = 45.0;
  int panel_nodes = 20;

  static KernelSpec zero() { return {KernelKind::zero}; }
  static KernelSpec sine() { return {KernelKind::sine}; }
  static KernelSpec chebyshev_kc() { return {KernelKind::chebyshev_kc}; }
  static KernelSpec bernstein_szego(double r, KernelRep rep = KernelRep::automatic) {
    return {KernelKind::bernstein_szego, r, rep};
  }

  /// Kinked at z = 0: the symbol approaches 1 only like xi^-2.
  bool kinked() const { return kind == KernelKind::chebyshev_kc || kind == KernelKind::bernstein_szego; }

  void validate() const {
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("KernelSpec: r must be finite and >= 0");
    if (panel_nodes < 2) throw std::invalid_argument("KernelSpec: panel_nodes must be >= 2");
    if (!(tail_cutoff > 0.0)) throw std::invalid_argument("KernelSpec: tail_cutoff must be > 0");
    if (rep == KernelRep::automatic) return;
    if (kind != KernelKind::bernstein_szego) {
      if (rep != KernelRep::cosh_form || kind == KernelKind::zero || kind == KernelKind::sine)
        throw std::invalid_argument("KernelSpec: " + to_string(rep) + " not available for " + to_string(kind));
      return;
    }
    if (rep == KernelRep::sine_form && !(r > 0.0))
      throw std::invalid_argument("KernelSpec: sine_form requires r > 0");
    if (rep == KernelRep::bessel_form && r != 1.0)
      throw std::invalid_argument("KernelSpec: bessel_form requires r = 1");
  }

  std::string name() const {
    std::string s = to_string(kind);
    if (kind == KernelKind::bernstein_szego) s += "(r=" + std::to_string(r) + ")";
    return s;
  }
};

namespace detail {

using cplx = std::complex<double>;

/// int_1^inf e^{izu} F(u, sqrt(u^2 - 1)) du for z >= 0, taken along u = 1 + i v^2.
template <class F>
cplx ray_integral(double z, F&& f, double tail_cutoff = 45.0, int nodes = 20) {
  const QuadratureRule& rule = gauss_legendre(nodes);
  const cplx sqrt_i{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};
  const auto integrand = [&](double v) {
    const cplx u{1.0, v * v};
    const cplx su = v * sqrt_i * std::sqrt(cplx{2.0, v * v});  // sqrt(u^2 - 1), continuous from u = 1
    return std::exp(-z * v * v) * f(u, su) * (2.0 * v);
  };
  const double w0 = 0.5 / std::max(1.0, std::sqrt(z));
  const double vmax = 6.0;
  const double V0 = z > 0 ? std::min(std::sqrt(tail_cutoff / z), vmax) : vmax;

  std::vector<double> breaks;
  for (double b = std::min(w0, V0); b > 1e-6; b *= 0.5) breaks.push_back(b);
  breaks.push_back(0.0);
  std::reverse(breaks.begin(), breaks.end());
  const int nuni = static_cast<int>(std::ceil((V0 - breaks.back()) / w0 - 1e-12));
  const double a = breaks.back();
  for (int j = 1; j <= nuni; ++j) breaks.push_back(a + (V0 - a) * j / nuni);
  cplx acc = integrate_panels(rule, breaks, integrand);

  if (z * V0 * V0 < tail_cutoff) {
    // v = V0 / w, w in (0, 1]
    const auto mapped = [&](double w) { return integrand(V0 / w) * (V0 / (w * w)); };
    std::vector<double> wb{0.0};
    for (double b = 1.0 / 64; b < 1.0; b *= 2) wb.push_back(b);
    wb.push_back(1.0);
    acc += integrate_panels(rule, wb, mapped);
  }
  return cplx{0.0, 1.0} * std::exp(cplx{0.0, z}) * acc;
}

/// sin z / (pi z) with the removable point handled.
inline double sinc_over_pi(double z) {
  if (std::fabs(z) < 1e-8) return (1.0 - z * z / 6.0) / std::numbers::pi;
  return std::sin(z) / (std::numbers::pi * z);
}

/// int_0^x J_1(t)/t dt, x >= 0.
inline double bessel_j1_over_t_integral(double x) {
  if (x <= 0.0) return 0.0;
  const QuadratureRule& rule = gauss_legendre(20);
  const int panels = std::max(1, static_cast<int>(std::ceil(x / 2.0)));
  double acc = 0.0;
  for (int j = 0; j < panels; ++j)
    acc += integrate(rule, x * j / panels, x * (j + 1) / panels,
                     [](double t) { return t < 1e-300 ? 0.5 : bessel_j(1, t) / t; });
  return acc;
}

inline double kc_cosh(const KernelSpec& k, double z) {
  // e^{-t} dt = (u - sqrt(u^2-1)) du / sqrt(u^2-1)
  const auto f = [](cplx u, cplx su) { return 1.0 / (su * (u + su)); };
  return sinc_over_pi(z) - ray_integral(z, f, k.tail_cutoff, k.panel_nodes).real() / std::numbers::pi;
}

inline double bs_cosh(const KernelSpec& k, double z) {
  const double r2 = k.r * k.r;
  // u su/(su^2 + r^2) - 1 without the cancellation at large |u|
  const auto f = [r2](cplx u, cplx su) { return (su / (u + su) - r2) / (su * su + r2); };
  return sinc_over_pi(z) - ray_integral(z, f, k.tail_cutoff, k.panel_nodes).real() / std::numbers::pi;
}

inline double bs_sine(const KernelSpec& k, double z) {
  const double r2 = k.r * k.r;
  // dt = du / sqrt(u^2 - 1)
  const auto p = [r2](cplx u, cplx su) {
    const cplx den = su * su + r2;
    return (r2 * u * u + (r2 - 1.0) * su * su) / (den * den * su);
  };
  if (z < 1e-6) {
    // (1/(pi z)) sin(z u) -> u / pi
    const auto up = [&](cplx u, cplx su) { return u * p(u, su); };
    return ray_integral(0.0, up, k.tail_cutoff, k.panel_nodes).real() / std::numbers::pi;
  }
  return ray_integral(z, p, k.tail_cutoff, k.panel_nodes).imag() / (std::numbers::pi * z);
}

inline double bs_bessel(double z) { return 0.5 * (1.0 - bessel_j1_over_t_integral(z)); }

}  // namespace detail

/// Representation actually used for (spec, z).
inline KernelRep resolved_rep(const KernelSpec& spec, double z) {
  if (spec.rep != KernelRep::automatic) return spec.rep;
  if (spec.kind != KernelKind::bernstein_szego) return KernelRep::cosh_form;
  if (spec.r >= 0.1 && std::fabs(z) >= 1.0) return KernelRep::sine_form;
  return KernelRep::cosh_form;
}

/// K(z); even in z.
inline double kernel_eval(const KernelSpec& spec, double z) {
  spec.validate();
  z = std::fabs(z);
  switch (spec.kind) {
    case KernelKind::zero: return 0.0;
    case KernelKind::sine: return detail::sinc_over_pi(z);
    case KernelKind::chebyshev_kc: return detail::kc_cosh(spec, z);
    case KernelKind::bernstein_szego:
      switch (resolved_rep(spec, z)) {
        case KernelRep::sine_form: return detail::bs_sine(spec, z);
        case KernelRep::bessel_form: return detail::bs_bessel(z);
        default: return detail::bs_cosh(spec, z);
      }
  }
  throw std::invalid_argument("kernel_eval: unknown kernel kind");
}

/// sigma(r, xi): 0 on |xi| <= 1, |xi| sqrt(xi^2-1)/(xi^2-1+r^2) outside.
inline double symbol_sigma(double r, double xi) {
  const double a = std::fabs(xi);
  if (a <= 1.0) return 0.0;
  const double d = (a - 1.0) * (a + 1.0);
  return a * std::sqrt(d) / (d + r * r);
}

namespace detail {

/// Si(x) = int_0^x sin t / t dt.
inline double sine_integral(double x) {
  if (x < 0) return -sine_integral(-x);
  if (x <= 40.0) {
    const QuadratureRule& rule = gauss_legendre(20);
    const int panels = std::max(1, static_cast<int>(std::ceil(x / 2.0)));
    double acc = 0.0;
    for (int j = 0; j < panels; ++j)
      acc += integrate(rule, x * j / panels, x * (j + 1) / panels,
                       [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; });
    return acc;
  }
  // Si = pi/2 - f cos x - g sin x, asymptotic auxiliary functions
  double f = 0.0, g = 0.0, term_f = 1.0 / x, term_g = 1.0 / (x * x);
  for (int k = 0; k < 12; ++k) {
    f += term_f;
    g += term_g;
    term_f *= -(2.0 * k + 1) * (2.0 * k + 2) / (x * x);
    term_g *= -(2.0 * k + 2) * (2.0 * k + 3) / (x * x);
  }
  return std::numbers::pi / 2 - f * std::cos(x) - g * std::sin(x);
}

}  // namespace detail

/// (1/pi) int_0^inf (1 - sigma(r, xi)) cos(xi z) dxi, computed on the real
/// xi-axis up to Xi with the (r^2 - 1/2)/xi^2 asymptote of sigma - 1 beyond.
inline double kernel_from_symbol(double r, double z) {
  using std::numbers::pi;
  z = std::fabs(z);
  if (z > 50.0) throw std::invalid_argument("kernel_from_symbol: |z| must be <= 50");
  const QuadratureRule& rule = gauss_legendre(20);
  const double r2 = r * r;
  double acc = detail::sinc_over_pi(z) * pi;  // int_0^1 cos(xi z) dxi

  // xi = 1 + w^2 on [1, 2]: removes the square-root endpoint behaviour
  const auto near = [&](double w) {
    const double d = w * w * (2.0 + w * w);  // xi^2 - 1
    const double xi = 1.0 + w * w;
    const double sd = std::sqrt(d);
    return (r2 - sd / (xi + sd)) / (d + r2) * std::cos(xi * z) * 2.0 * w;
  };
  std::vector<double> wb{0.0};
  for (double b = std::ldexp(1.0, -20); b < 1.0; b *= 2) wb.push_back(b);
  wb.push_back(1.0);
  acc += integrate_panels(rule, wb, near);

  const double Xi = 1000.0;
  const double width = z > 0 ? std::min(2.0, 2 * pi / z) : 2.0;
  const int panels = static_cast<int>(std::ceil((Xi - 2.0) / width));
  const auto far = [&](double xi) { return (1.0 - symbol_sigma(r, xi)) * std::cos(xi * z); };
  for (int j = 0; j < panels; ++j)
    acc += integrate(rule, 2.0 + (Xi - 2.0) * j / panels, 2.0 + (Xi - 2.0) * (j + 1) / panels, far);

  // int_Xi^inf c cos(xi z)/xi^2 dxi, c = r^2 - 1/2
  const double c = r2 - 0.5;
  const double tail = z == 0.0 ? 1.0 / Xi
                               : std::cos(z * Xi) / Xi - z * (pi / 2 - detail::sine_integral(z * Xi));
  acc += c * tail;
  return acc / pi;
}

/// max_{5 <= |z| <= zmax} |z K(z)|, sampled on a grid of step 0.25.
inline double decay_constant(const KernelSpec& spec, double zmax = 100.0) {
  double c = 0.0;
  for (double z = 5.0; z <= zmax + 1e-12; z += 0.25) c = std::max(c, std::fabs(z * kernel_eval(spec, z)));
  return c;
}

}  // namespace arcdet
