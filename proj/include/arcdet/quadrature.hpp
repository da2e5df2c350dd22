#pragma once

// Gauss-type rules on the reference interval [-1, 1].
//
//   gauss_legendre     w(x) = 1
//   gauss_chebyshev_1  w(x) = 1/sqrt(1-x^2)
//   gauss_chebyshev_2  w(x) = sqrt(1-x^2)
//
// Nodes are stored in increasing order. Legendre nodes come from Newton
// iteration on the three-term recurrence started from the usual
// cos(pi (j - 1/4)/(m + 1/2)) guesses; the rule is mirrored so it is
// exactly symmetric.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcdet {

enum class QuadratureKind { gauss_legendre, gauss_chebyshev_1, gauss_chebyshev_2 };

inline std::string to_string(QuadratureKind k) {
  switch (k) {
    case QuadratureKind::gauss_legendre: return "gauss_legendre";
    case QuadratureKind::gauss_chebyshev_1: return "gauss_chebyshev_1";
    case QuadratureKind::gauss_chebyshev_2: return "gauss_chebyshev_2";
  }
  return "unknown";
}

struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::gauss_legendre;
  int m = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Weight function the rule integrates against.
inline double rule_weight(QuadratureKind kind, double x) {
  switch (kind) {
    case QuadratureKind::gauss_legendre: return 1.0;
    case QuadratureKind::gauss_chebyshev_1: return 1.0 / std::sqrt((1.0 - x) * (1.0 + x));
    case QuadratureKind::gauss_chebyshev_2: return std::sqrt((1.0 - x) * (1.0 + x));
  }
  return 1.0;
}

namespace detail {

inline QuadratureRule build_gauss_legendre(int m) {
  QuadratureRule rule{QuadratureKind::gauss_legendre, m, std::vector<double>(m), std::vector<double>(m)};
  // Legendre P_m(x) and its derivative by the three-term recurrence
  const auto eval = [m](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  const int half = (m + 1) / 2;
  for (int j = 1; j <= half; ++j) {
    double x = std::cos(std::numbers::pi * (j - 0.25) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dx = eval(x, dp) / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    eval(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // the j-th largest node sits at index m - j
    rule.nodes[m - j] = x;
    rule.nodes[j - 1] = -x;
    rule.weights[m - j] = w;
    rule.weights[j - 1] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

}  // namespace detail

inline QuadratureRule make_rule(QuadratureKind kind, int m) {
  if (m < 1) throw std::invalid_argument("make_rule: node count must be positive, got " + std::to_string(m));
  using std::numbers::pi;
  switch (kind) {
    case QuadratureKind::gauss_legendre:
      if (m == 1) return {kind, 1, {0.0}, {2.0}};
      return detail::build_gauss_legendre(m);
    case QuadratureKind::gauss_chebyshev_1: {
      QuadratureRule r{kind, m, std::vector<double>(m), std::vector<double>(m, pi / m)};
      for (int j = 1; j <= m; ++j) r.nodes[m - j] = std::cos((2.0 * j - 1.0) * pi / (2.0 * m));
      if (m % 2 == 1) r.nodes[m / 2] = 0.0;
      return r;
    }
    case QuadratureKind::gauss_chebyshev_2: {
      QuadratureRule r{kind, m, std::vector<double>(m), std::vector<double>(m)};
      for (int j = 1; j <= m; ++j) {
        const double t = j * pi / (m + 1.0);
        const double st = std::sin(t);
        r.nodes[m - j] = std::cos(t);
        r.weights[m - j] = pi / (m + 1.0) * st * st;
      }
      if (m % 2 == 1) r.nodes[m / 2] = 0.0;
      return r;
    }
  }
  throw std::invalid_argument("make_rule: unknown kind");
}

/// Process-wide cache of Gauss-Legendre rules. References stay valid for
/// the lifetime of the program.
inline const QuadratureRule& gauss_legendre(int m) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<QuadratureRule>(make_rule(QuadratureKind::gauss_legendre, m));
  return *slot;
}

/// Gauss-Legendre integral of f over [a, b] with the given rule.
template <class F>
auto integrate(const QuadratureRule& rule, double a, double b, F&& f) -> decltype(f(a)) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  decltype(f(a)) acc{};
  for (std::size_t j = 0; j < rule.size(); ++j) acc += rule.weights[j] * f(mid + half * rule.nodes[j]);
  return acc * half;
}

/// Composite Gauss-Legendre over consecutive breakpoints.
template <class F>
auto integrate_panels(const QuadratureRule& rule, const std::vector<double>& breaks, F&& f)
    -> decltype(f(breaks.front())) {
  decltype(f(breaks.front())) acc{};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) acc += integrate(rule, breaks[i], breaks[i + 1], f);
  return acc;
}

}  // namespace arcdet
