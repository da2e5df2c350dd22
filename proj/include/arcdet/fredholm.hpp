#pragma once

// det(I - K) for a convolution operator on L2(0, 2s).
//
// Nystrom: M_ij = delta_ij - sqrt(w_i w_j) K(x_i - x_j) on a Gauss-Legendre
// grid. For kernels with a |z| kink at the origin (chebyshev_kc,
// bernstein_szego) the raw determinant converges only like m^-2 with a
// clean c2/m^2 + c3/m^3 + ... expansion, so fredholm_det extrapolates the
// values at m, 2m, ..., 2^{L-1} m, removing one power per level.
// nystrom_det is the single-level value.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "arcdet/kernels.hpp"
#include "arcdet/memo.hpp"
#include "arcdet/quadrature.hpp"

namespace arcdet {

struct NystromGrid {
  double s = 0.0;
  int m = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule mapped to [0, 2s].
inline NystromGrid make_grid(double s, int m) {
  if (!(s > 0.0)) throw std::invalid_argument("make_grid: s must be > 0");
  if (m < 1) throw std::invalid_argument("make_grid: m must be >= 1");
  const QuadratureRule& rule = gauss_legendre(m);
  NystromGrid g{s, m, std::vector<double>(m), std::vector<double>(m)};
  for (int i = 0; i < m; ++i) {
    g.nodes[i] = s * (1.0 + rule.nodes[i]);
    g.weights[i] = s * rule.weights[i];
  }
  return g;
}

/// Chebyshev interpolant of K on [0, L]; K restricted to z >= 0 is analytic.
struct ChebyshevTable {
  double length = 0.0;
  std::vector<double> coeffs;

  double operator()(double z) const {
    const double t = 2.0 * std::fabs(z) / length - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) {
      const double b0 = 2.0 * t * b1 - b2 + coeffs[k];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + coeffs[0];
  }
};

namespace detail {

inline std::vector<double> chebyshev_coeffs(const std::function<double(double)>& f, double L, int N) {
  // Chebyshev-Lobatto samples, discrete cosine transform
  std::vector<double> v(N + 1), c(N + 1);
  for (int j = 0; j <= N; ++j) v[j] = f(0.5 * L * (1.0 + std::cos(std::numbers::pi * j / N)));
  for (int k = 0; k <= N; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= N; ++j) {
      const double term = v[j] * std::cos(std::numbers::pi * k * j / N);
      acc += (j == 0 || j == N) ? 0.5 * term : term;
    }
    c[k] = acc * 2.0 / N;
  }
  c[0] *= 0.5;
  c[N] *= 0.5;
  return c;
}

}  // namespace detail

/// Doubles the degree until the trailing coefficients reach the evaluation noise.
inline ChebyshevTable tabulate_kernel(const KernelSpec& spec, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("tabulate_kernel: length must be > 0");
  const auto f = [&](double z) { return kernel_eval(spec, z); };
  std::vector<double> c;
  for (int N = 32; N <= 1024; N *= 2) {
    c = detail::chebyshev_coeffs(f, L, N);
    double big = 0.0, tail = 0.0;
    for (int k = 0; k <= N; ++k) big = std::max(big, std::fabs(c[k]));
    for (int k = N - 3; k <= N; ++k) tail = std::max(tail, std::fabs(c[k]));
    if (tail <= 1e-15 * std::max(big, 1.0)) break;
  }
  double big = 0.0;
  for (double v : c) big = std::max(big, std::fabs(v));
  while (c.size() > 1 && std::fabs(c.back()) < 1e-17 * std::max(big, 1.0)) c.pop_back();
  return {L, std::move(c)};
}

namespace detail {

using KernelTableKey = std::tuple<int, double, int, double, int, double>;

inline MemoTable<KernelTableKey, ChebyshevTable>& kernel_table_memo() {
  static MemoTable<KernelTableKey, ChebyshevTable> t;
  return t;
}

}  // namespace detail

/// Memoized table of K on [0, 2s].
inline ChebyshevTable kernel_table(const KernelSpec& spec, double s) {
  spec.validate();
  const detail::KernelTableKey key{static_cast<int>(spec.kind), spec.r, static_cast<int>(spec.rep), spec.tail_cutoff,
                                   spec.panel_nodes, s};
  return detail::kernel_table_memo().get(key, [&] { return tabulate_kernel(spec, 2.0 * s); });
}

/// Symmetrized Nystrom matrix I - W^{1/2} K W^{1/2}.
inline Eigen::MatrixXd nystrom_matrix(const std::function<double(double)>& K, const NystromGrid& g) {
  const int m = g.m;
  Eigen::MatrixXd M(m, m);
  std::vector<double> sw(m);
  for (int i = 0; i < m; ++i) sw[i] = std::sqrt(g.weights[i]);
  for (int i = 0; i < m; ++i) {
    M(i, i) = 1.0 - g.weights[i] * K(0.0);
    for (int j = 0; j < i; ++j) {
      const double v = -sw[i] * sw[j] * K(g.nodes[i] - g.nodes[j]);
      M(i, j) = v;
      M(j, i) = v;
    }
  }
  return M;
}

enum class Factorization { lu, ldlt };

inline double matrix_det(const Eigen::MatrixXd& M, Factorization f = Factorization::lu) {
  if (f == Factorization::ldlt) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    double d = 1.0;
    for (Eigen::Index i = 0; i < M.rows(); ++i) d *= ldlt.vectorD()(i);
    return d;
  }
  return Eigen::PartialPivLU<Eigen::MatrixXd>(M).determinant();
}

/// Kernel evaluator used by the Nystrom assembly: direct for closed forms, tabulated otherwise.
inline std::function<double(double)> nystrom_kernel(const KernelSpec& spec, double s) {
  spec.validate();
  if (spec.kind == KernelKind::zero || spec.kind == KernelKind::sine)
    return [spec](double z) { return kernel_eval(spec, z); };
  return [table = kernel_table(spec, s)](double z) { return table(z); };
}

/// Single-level symmetrized Nystrom determinant.
inline double nystrom_det(const KernelSpec& spec, double s, int m, Factorization f = Factorization::lu) {
  if (m < 4) throw std::invalid_argument("nystrom_det: m must be >= 4");
  return matrix_det(nystrom_matrix(nystrom_kernel(spec, s), make_grid(s, m)), f);
}

/// Removes c_p/m^p for p = 2, 3, ... from values at m, 2m, 4m, ...
inline double richardson_powers(std::vector<double> d) {
  for (int p = 2; d.size() > 1; ++p) {
    const double f = std::ldexp(1.0, p);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = (f * d[i + 1] - d[i]) / (f - 1.0);
    d.pop_back();
  }
  return d.empty() ? 0.0 : d[0];
}

inline constexpr int kDefaultLevels = 4;

/// det(I - K) on [0, 2s]. Kinked kernels: extrapolated over `levels` doublings of m.
inline double fredholm_det(const KernelSpec& spec, double s, int m, int levels = kDefaultLevels) {
  if (m < 4) throw std::invalid_argument("fredholm_det: m must be >= 4");
  if (levels < 1 || (m << (levels - 1)) > 4096) throw std::invalid_argument("fredholm_det: levels out of range");
  if (!spec.kinked()) return nystrom_det(spec, s, m);
  std::vector<double> d;
  for (int k = 0; k < levels; ++k) d.push_back(nystrom_det(spec, s, m << k));
  return richardson_powers(std::move(d));
}

/// e^{-s^2/2 - 2rs} (cosh s + r sinh s).
inline double closed_form_bs(double r, double s) {
  return std::exp(-0.5 * s * s - 2.0 * r * s) * (std::cosh(s) + r * std::sinh(s));
}

/// Closed form for the kernel, if one exists.
inline std::optional<double> closed_form(const KernelSpec& spec, double s) {
  switch (spec.kind) {
    case KernelKind::zero: return 1.0;
    case KernelKind::chebyshev_kc: return closed_form_bs(0.0, s);
    case KernelKind::bernstein_szego: return closed_form_bs(spec.r, s);
    default: return std::nullopt;
  }
}

struct ConvergenceRow {
  int m = 0;
  double det = 0.0;
  double error = 0.0;  // vs closed form, or vs the largest m without one
};

inline std::vector<ConvergenceRow> convergence_report(const KernelSpec& spec, double s, const std::vector<int>& m_list) {
  if (!std::is_sorted(m_list.begin(), m_list.end()))
    throw std::invalid_argument("convergence_report: m_list must be ascending");
  std::vector<ConvergenceRow> rows;
  for (int m : m_list) rows.push_back({m, fredholm_det(spec, s, m), 0.0});
  const auto exact = closed_form(spec, s);
  const double ref = exact ? *exact : (rows.empty() ? 0.0 : rows.back().det);
  for (auto& row : rows) row.error = std::fabs(row.det - ref);
  return rows;
}

}  // namespace arcdet
