#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library code paths it is used to check.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// Power series of J_nu in long double, no asymptotic branch.
inline long double bessel_j_series(int nu, long double x) {
  const long double h = x / 2;
  long double term = (nu == 0) ? 1.0L : h;
  long double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= -h * h / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::fabs(term) < 1e-30L) break;
  }
  return sum;
}

/// Root of f in [a, b] by bisection.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
    if (b - a < 1e-16) break;
  }
  return 0.5 * (a + b);
}

/// ln A (Glaisher-Kinkelin) from the hyperfactorial: ln H(n) = sum k ln k
/// = ln A + (n^2/2 + n/2 + 1/12) ln n - n^2/4 + 1/(720 n^2) - 1/(5040 n^4) + ...
inline double log_glaisher(int n = 2000) {
  long double s = 0.0L, c = 0.0L;  // Kahan
  for (int k = 2; k <= n; ++k) {
    const long double y = k * std::log(static_cast<long double>(k)) - c;
    const long double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  const long double N = n;
  return static_cast<double>(s - (N * N / 2 + N / 2 + 1.0L / 12) * std::log(N) + N * N / 4 - 1.0L / (720 * N * N) +
                             1.0L / (5040 * N * N * N * N));
}

/// Monic Legendre polynomial from the explicit binomial sum
/// L_n(x) = 2^n / C(2n,n) sum_k C(n,k) C(n+k,k) ((x-1)/2)^k.
/// Summed in 100-digit binary floating point: the sum alternates with large terms.
inline double legendre_explicit(int n, double xd) {
  using big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>>;
  auto binom = [](int a, int b) {
    big r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  const big x = xd;
  big sum = 0, p = 1;
  for (int k = 0; k <= n; ++k) {
    sum += binom(n, k) * binom(n + k, k) * p;
    p *= (x - 1) / 2;
  }
  return static_cast<double>(boost::multiprecision::pow(big(2), n) / binom(2 * n, n) * sum);
}

/// Monic Chebyshev polynomials by the three-term recurrence (both kinds).
inline long double chebyshev_monic_recurrence(int kind, int n, long double x) {
  if (n == 0) return 1.0L;
  long double p0 = 1.0L, p1 = x;
  for (int k = 1; k < n; ++k) {
    const long double beta = (kind == 1 && k == 1) ? 0.5L : 0.25L;
    const long double p2 = x * p1 - beta * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Adaptive Gauss-Kronrod-free brute force: composite Simpson with
/// Richardson on two resolutions.
inline double simpson_richardson(const std::function<double(double)>& f, double a, double b, int n) {
  const double s1 = simpson(f, a, b, n), s2 = simpson(f, a, b, 2 * n);
  return s2 + (s2 - s1) / 15.0;
}

/// Gaussian elimination with partial pivoting on a dense copy, returning
/// (sign, log|det|). Plain loops, kept separate from the Eigen path.
inline std::pair<int, double> logdet_elimination(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  int sign = 1;
  double logmag = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    if (a[p][c] == 0.0) return {0, -INFINITY};
    if (p != c) {
      std::swap(a[p], a[c]);
      sign = -sign;
    }
    if (a[c][c] < 0) sign = -sign;
    logmag += std::log(std::fabs(a[c][c]));
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return {sign, logmag};
}

}  // namespace oracle

namespace oracle {

/// (1/2pi) int g(theta) f(theta) dtheta over [alpha, 2pi - alpha] for a weight
/// given pointwise in theta, via theta = 2 acos(gamma cos psi) and composite
/// 3-point Gauss in psi (endpoints never sampled).
/// dtheta/dpsi = 2 gamma sin psi / sin(theta/2).
template <class F, class G>
auto arc_mean(double alpha, F&& f, G&& g, int panels = 2000) {
  const double gamma = std::cos(alpha / 2.0);
  using R = decltype(g(0.0) * f(0.0));
  auto integrand = [&](double psi) -> R {
    const double half = std::acos(gamma * std::cos(psi));
    const double jac = 2.0 * gamma * std::sin(psi) / std::sin(half);
    return g(2.0 * half) * f(2.0 * half) * jac;
  };
  const double h = std::numbers::pi / panels, d = std::sqrt(0.6) * h / 2.0;
  R s{};
  for (int i = 0; i < panels; ++i) {
    const double c = (i + 0.5) * h;
    s += (5.0 / 18.0) * (integrand(c - d) + integrand(c + d)) + (8.0 / 18.0) * integrand(c);
  }
  return s * h / (2.0 * std::numbers::pi);
}

/// Dense Gaussian elimination solve with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace oracle

namespace oracle {

// Composite 3-point Gauss on [a, b] with n panels.
template <class F>
double gauss3(F&& f, double a, double b, int n) {
  static const double x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static const double w[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  const double h = (b - a) / n;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double mid = a + (j + 0.5) * h;
    for (int i = 0; i < 3; ++i) acc += w[i] * f(mid + 0.5 * h * x[i]);
  }
  return acc * 0.5 * h;
}

// Bernstein-Szego cosh-form kernel on the real u-axis, z >= 0.5:
// panels on [1, U] plus three integration-by-parts terms of the
// -(r^2 - 1/2)/u^2 tail.
inline double kbs_real_axis(double r, double z) {
  const double r2 = r * r;
  const auto hd = [r2](double u, double d) { return u * std::sqrt(d) / (d + r2) - 1.0; };
  const auto h = [&](double u) { return hd(u, u * u - 1.0); };
  double J = 0.0;
  // u = 1 + w^2 on [1, 2], fine panels near w = 0 for small r
  for (double a = 0.0, b = 1e-4; a < 1.0; a = b, b = std::min(1.0, 2 * b))
    J += gauss3([&](double w) { return hd(1 + w * w, w * w * (2 + w * w)) * std::cos(z * (1 + w * w)) * 2 * w; },
                a, b, 400);
  const double U = 1000.0;
  const int panels = static_cast<int>((U - 2.0) * z / 0.05) + 1;
  J += gauss3([&](double u) { return h(u) * std::cos(z * u); }, 2.0, U, panels);
  const double c = r2 - 0.5;
  const double phi = -c / (U * U), dphi = 2 * c / (U * U * U), ddphi = -6 * c / (U * U * U * U);
  J += -std::sin(z * U) * phi / z - std::cos(z * U) * dphi / (z * z) + std::sin(z * U) * ddphi / (z * z * z);
  return std::sin(z) / (M_PI * z) - J / M_PI;
}

// int_0^x J_1(t)/t dt with std::cyl_bessel_j.
inline double j1_over_t(double x) {
  return gauss3([](double t) { return t == 0 ? 0.5 : std::cyl_bessel_j(1.0, t) / t; }, 0.0, x,
                std::max(50, static_cast<int>(x * 40)));
}

}  // namespace oracle
