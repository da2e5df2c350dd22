#pragma once

// Toeplitz determinants D_n(f) = det(I_{j-k})_{j,k=0..n} of arc weights,
// computed two independent ways:
//   direct   dense pivoted LU of the assembled matrix
//   product  D_n = prod_j chi_j^{-2}, either factor by factor or in the
//            telescoped closed forms
//              P-form: 2^{n(n+1)} gamma^{n^2+3n+2} pi^{-(n+1)} P_{n+1}(1/gamma) prod_{j<=n} h_j
//              Q-form: (2 gamma)^{n(n+1)} t_n pi^{-n} prod_{j<n} h'_j

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arcdet/arcmap.hpp"
#include "arcdet/log_signed.hpp"

namespace arcdet {

namespace detail {

inline MemoTable<std::tuple<WeightKey, int, int>, double>& fourier_memo() {
  static MemoTable<std::tuple<WeightKey, int, int>, double> t;
  return t;
}

}  // namespace detail

/// I_k = (1/2pi) int e^{-ik theta} f dtheta, real and even in k.
/// Mapped: (gamma/pi) int_0^pi cos(2k acos(gamma cos psi)) w(cos psi) sin psi dpsi.
inline double fourier_coeff(const ArcWeight& fw, int k, int m = -1) {
  k = std::abs(k);
  if (m < 0) m = default_nodes(k);
  return detail::fourier_memo().get({fw.key(), k, m}, [&] {
    const double omg2 = fw.one_minus_gamma2();
    return arc_integral_psi(fw, 2.0 * k + 1.0, m, [&](double psi) {
      return std::cos(2.0 * k * detail::half_theta(fw.gamma, omg2, psi));
    });
  });
}

/// Closed form of I_k for the arc indicator f0.
inline double fourier_coeff_f0_exact(double alpha, int k) {
  k = std::abs(k);
  if (k == 0) return 1.0 - alpha / std::numbers::pi;
  return -std::sin(k * alpha) / (std::numbers::pi * k);
}

/// I_0..I_kmax.
inline std::vector<double> fourier_coeffs(const ArcWeight& fw, int kmax, int m = -1) {
  std::vector<double> out(kmax + 1);
  for (int k = 0; k <= kmax; ++k) out[k] = fourier_coeff(fw, k, m < 0 ? -1 : m);
  return out;
}

/// Symmetric (n+1)x(n+1) Toeplitz matrix with entries I_{|j-k|}.
inline Eigen::MatrixXd toeplitz_matrix(const std::vector<double>& I, int n) {
  if (static_cast<int>(I.size()) < n + 1) throw std::invalid_argument("toeplitz_matrix: too few coefficients");
  Eigen::MatrixXd T(n + 1, n + 1);
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= n; ++k) T(j, k) = I[std::abs(j - k)];
  return T;
}

/// log|det| with sign by partial-pivoting LU.
inline LogSigned logdet_lu(const Eigen::MatrixXd& A) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const auto& U = lu.matrixLU();
  LogSigned acc = LogSigned::from_real(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    acc *= LogSigned::from_real(U(i, i));
    if (acc.is_zero()) return acc;
  }
  return acc;
}

/// log det of a symmetric matrix from its eigenvalues.
inline LogSigned logdet_symmetric_eigen(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  LogSigned acc = LogSigned::one();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) acc *= LogSigned::from_real(es.eigenvalues()(i));
  return acc;
}

/// D_n(f) by elimination on the assembled matrix; n + 1 <= 2000.
inline LogSigned toeplitz_logdet_direct(const ArcWeight& fw, int n, int m = -1) {
  if (n < 0) throw std::invalid_argument("toeplitz_logdet_direct: n must be >= 0");
  if (n + 1 > 2000) throw std::invalid_argument("toeplitz_logdet_direct: n + 1 exceeds 2000");
  return logdet_lu(toeplitz_matrix(fourier_coeffs(fw, n, m), n));
}

enum class ProductPath { telescoped, factors };

/// D_n(f) = prod_{j<=n} chi_j^{-2}.
inline LogSigned toeplitz_logdet_product(const ArcWeight& fw, int n, ProductPath path = ProductPath::telescoped) {
  using std::numbers::ln2;
  if (!fw.has_family()) throw std::invalid_argument("toeplitz_logdet_product: weight has no polynomial family");
  if (n < 0) throw std::invalid_argument("toeplitz_logdet_product: n must be >= 0");
  if (path == ProductPath::factors) {
    LogSigned acc = LogSigned::one();
    for (int j = 0; j <= n; ++j) acc *= chi_sq_inv(fw, j);
    return acc;
  }
  const double N = n;
  const double lg = std::log(fw.gamma), lpi = std::log(std::numbers::pi);
  if (fw.form == ArcForm::p_form) {
    const double s = eval_monic_scaled(fw.base, n + 1, 1.0 / fw.gamma);
    if (s == 0.0) throw DegenerateFamilyError("P_{n+1}(1/gamma) = 0");
    double sum_h = 0.0;
    for (int j = 0; j <= n; ++j) sum_h += norm_h_log(fw.base, j);
    const double lm =
        N * (N + 1) * ln2 + (N * N + 3 * N + 2) * lg - (N + 1) * lpi + std::log(std::fabs(s)) - (N + 1) * ln2 + sum_h;
    return LogSigned::from_log(lm, s > 0 ? 1 : -1);
  }
  double sum_h = 0.0;
  for (int j = 0; j < n; ++j) sum_h += norm_h_log(fw.base, j);
  const double lm = N * (N + 1) * (ln2 + lg) + log_tau_coeff(fw, n) - N * ln2 - N * lpi + sum_h;
  return LogSigned::from_log(lm);
}

/// Which arc weight a scaling run builds at alpha = 2s/n.
struct ScalingFamily {
  enum class Kind { chebyshev1, bernstein_szego, f0, f1, f2, chebyshev2_q };
  Kind kind = Kind::chebyshev1;
  double r = 0.0;  // bernstein_szego only

  ArcWeight at(double alpha) const {
    switch (kind) {
      case Kind::chebyshev1: return ArcWeight::p_form(PolyFamily::chebyshev1(), alpha);
      case Kind::bernstein_szego: return ArcWeight::bernstein_szego(alpha, r);
      case Kind::f0: return ArcWeight::f0(alpha);
      case Kind::f1: return ArcWeight::f1(alpha);
      case Kind::f2: return ArcWeight::f2(alpha);
      case Kind::chebyshev2_q: return ArcWeight::q_form(PolyFamily::chebyshev2(), alpha);
    }
    return ArcWeight::f0(alpha);
  }

  std::string name() const {
    switch (kind) {
      case Kind::chebyshev1: return "chebyshev1";
      case Kind::bernstein_szego: return "bs";
      case Kind::f0: return "f0";
      case Kind::f1: return "f1";
      case Kind::f2: return "f2";
      case Kind::chebyshev2_q: return "chebyshev2_q";
    }
    return "unknown";
  }

  /// Limit of D_n as n -> infinity with alpha = 2s/n, where known in closed form.
  std::optional<double> limit(double s) const {
    switch (kind) {
      case Kind::chebyshev1: return std::exp(-s * s / 2) * std::cosh(s);
      case Kind::bernstein_szego:
        return std::exp(-s * s / 2 - 2 * r * s) * (std::cosh(s) + r * std::sinh(s));
      case Kind::chebyshev2_q: return std::exp(-s * s / 2 - 2 * s) * (std::cosh(s) + std::sinh(s));
      default: return std::nullopt;
    }
  }
};

struct ScalingRow {
  int n = 0;
  LogSigned logdet;
  double value = 0.0;                // exp(logdet)
  std::optional<double> limit;       // closed form, if any
  std::optional<double> deviation;   // |value - limit|
};

/// D_n at alpha = 2s/n for each n: product formula where a family exists,
/// dense elimination otherwise. `reference` overrides the closed-form limit.
inline std::vector<ScalingRow> scaling_sequence(const ScalingFamily& fam, double s, const std::vector<int>& n_list,
                                                std::optional<double> reference = std::nullopt) {
  std::vector<ScalingRow> rows;
  const auto lim = reference ? reference : fam.limit(s);
  for (int n : n_list) {
    if (n < 1) throw std::invalid_argument("scaling_sequence: n must be >= 1");
    ScalingRow row;
    row.n = n;
    if (s == 0.0 && fam.kind == ScalingFamily::Kind::f0) {
      row.logdet = LogSigned::one();  // f0 = 1 on the whole circle
    } else {
      const auto fw = fam.at(2.0 * s / n);
      row.logdet = fw.has_family() ? toeplitz_logdet_product(fw, n) : toeplitz_logdet_direct(fw, n);
    }
    row.value = row.logdet.to_real();
    row.limit = lim;
    if (lim) row.deviation = std::fabs(row.value - *lim);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace arcdet
