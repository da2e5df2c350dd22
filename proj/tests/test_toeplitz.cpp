#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "arcdet/toeplitz.hpp"
#include "oracles.hpp"

using namespace arcdet;
using std::numbers::pi;

namespace {

std::vector<ArcWeight> family_weights(double alpha) {
  return {ArcWeight::p_form(PolyFamily::chebyshev1(), alpha), ArcWeight::bernstein_szego(alpha, 0.5),
          ArcWeight::bernstein_szego(alpha, 1.0),           ArcWeight::bernstein_szego(alpha, 2.0),
          ArcWeight::f1(alpha),                              ArcWeight::f2(alpha),
          ArcWeight::q_form(PolyFamily::chebyshev2(), alpha), ArcWeight::p_form(PolyFamily::chebyshev2(), alpha)};
}

std::string label(const ArcWeight& fw) {
  return to_string(fw.base.family) + "_" + to_string(fw.form) + "_r" + std::to_string(fw.base.r);
}

}  // namespace

TEST(Fourier, IndicatorClosedForm) {
  for (double alpha : {0.005, 0.3, 2.0}) {
    const auto fw = ArcWeight::f0(alpha);
    EXPECT_NEAR(fourier_coeff(fw, 0), 1 - alpha / pi, 1e-13);
    for (int k = 1; k <= 800; k += (k < 20 ? 1 : 37)) {
      EXPECT_NEAR(fourier_coeff(fw, k), -std::sin(k * alpha) / (pi * k), 1e-12) << alpha << " " << k;
      EXPECT_EQ(fourier_coeff(fw, -k), fourier_coeff(fw, k));
      EXPECT_NEAR(fourier_coeff_f0_exact(alpha, k), -std::sin(k * alpha) / (pi * k), 1e-16);
    }
  }
}

TEST(Fourier, MatchesBruteForceAndBoundedByMean) {
  for (double alpha : {0.1, 1.0}) {
    for (const auto& fw : family_weights(alpha)) {
      const double I0 = fourier_coeff(fw, 0);
      for (int k = 0; k <= 12; ++k) {
        const double ref = oracle::arc_mean(
            alpha, [&](double th) { return arc_weight_eval(fw, th); }, [&](double th) { return std::cos(k * th); });
        EXPECT_NEAR(fourier_coeff(fw, k), ref, 1e-11 * std::max(1.0, I0)) << label(fw) << " " << k;
        EXPECT_LE(std::fabs(fourier_coeff(fw, k)), I0 * (1 + 1e-14));
      }
    }
  }
}

TEST(Direct, TrivialCases) {
  const auto fw = ArcWeight::f1(0.7);
  const auto d0 = toeplitz_logdet_direct(fw, 0);
  EXPECT_EQ(d0.sign, 1);
  EXPECT_NEAR(d0.logmag, std::log(fourier_coeff(fw, 0)), 1e-15);
  const auto full = ArcWeight::f0(0.0);
  for (int n : {0, 1, 5, 40}) {
    const auto d = toeplitz_logdet_direct(full, n);
    EXPECT_EQ(d.sign, 1);
    EXPECT_NEAR(d.logmag, 0.0, 1e-13);
  }
  EXPECT_THROW(toeplitz_logdet_direct(fw, 2000), std::invalid_argument);
  EXPECT_THROW(toeplitz_logdet_product(ArcWeight::f0(0.5), 3), std::invalid_argument);
}

TEST(Direct, SingularMatrixGivesZeroSign) {
  Eigen::MatrixXd A(2, 2);
  A << 1, 2, 2, 4;
  EXPECT_EQ(logdet_lu(A).sign, 0);
}

TEST(Direct, AgreesWithIndependentElimination) {
  for (const auto& fw : family_weights(0.2)) {
    const int n = 15;
    const auto I = fourier_coeffs(fw, n);
    std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1));
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) a[j][k] = I[std::abs(j - k)];
    const auto [sign, lm] = oracle::logdet_elimination(a);
    const auto d = toeplitz_logdet_direct(fw, n);
    EXPECT_EQ(d.sign, sign);
    EXPECT_NEAR(d.logmag, lm, 1e-10);
    const auto e = logdet_symmetric_eigen(toeplitz_matrix(I, n));
    EXPECT_EQ(e.sign, 1);
    EXPECT_NEAR(e.logmag, d.logmag, 1e-8);
  }
}

TEST(Product, NZeroIsTZero) {
  for (const auto& fw : family_weights(0.5)) {
    EXPECT_NEAR(toeplitz_logdet_product(fw, 0).logmag, std::log(fourier_coeff(fw, 0)), 1e-12) << label(fw);
  }
}

TEST(Product, TelescopedEqualsFactors) {
  for (double alpha : {0.01, 0.4, 2.0}) {
    for (const auto& fw : family_weights(alpha)) {
      for (int n : {0, 1, 2, 7, 30, 120}) {
        const auto a = toeplitz_logdet_product(fw, n, ProductPath::telescoped);
        const auto b = toeplitz_logdet_product(fw, n, ProductPath::factors);
        EXPECT_EQ(a.sign, 1);
        EXPECT_EQ(b.sign, 1);
        EXPECT_NEAR(a.logmag, b.logmag, 1e-9 * std::max(1.0, std::fabs(a.logmag))) << label(fw) << " " << n;
      }
    }
  }
}

TEST(Product, MatchesDirectOnScalingGrid) {
  for (double s : {0.5, 1.0, 2.0}) {
    for (int n = 1; n <= 30; ++n) {
      const double alpha = 2 * s / n;
      if (alpha >= pi) continue;
      for (const auto& fw : family_weights(alpha)) {
        const auto p = toeplitz_logdet_product(fw, n);
        const auto d = toeplitz_logdet_direct(fw, n);
        EXPECT_EQ(d.sign, 1);
        EXPECT_NEAR(p.logmag, d.logmag, 1e-7) << label(fw) << " s=" << s << " n=" << n;
      }
    }
  }
}

TEST(Product, ChebyshevFactorsMatchClosedForm) {
  // chi_n^{-2} = (2 gamma)^{2n} (gamma^2/pi) [P_{n+1}/P_n](1/gamma) h_n, with h_n = pi / 2^{2n-1}
  const double alpha = 0.05, g = std::cos(alpha / 2);
  const auto fw = ArcWeight::p_form(PolyFamily::chebyshev1(), alpha);
  const double y = 1 / g, t = std::acosh(y);
  for (int n = 1; n <= 50; ++n) {
    const double ratio = std::cosh((n + 1) * t) / std::cosh(n * t) / 2;
    const double ref = std::pow(2 * g, 2 * n) * g * g / pi * ratio * pi / std::pow(2.0, 2 * n - 1);
    EXPECT_NEAR(chi_sq_inv(fw, n).to_real(), ref, 1e-12 * ref);
  }
}

TEST(Scaling, SpecLimits) {
  const ScalingFamily cheb{ScalingFamily::Kind::chebyshev1};
  const auto rc = scaling_sequence(cheb, 1.0, {400});
  EXPECT_NEAR(rc[0].value / 0.9359, 1.0, 0.02);
  EXPECT_NEAR(*cheb.limit(1.0), std::exp(-0.5) * std::cosh(1.0), 1e-15);

  const ScalingFamily bs1{ScalingFamily::Kind::bernstein_szego, 1.0};
  const auto rb = scaling_sequence(bs1, 1.0, {400});
  EXPECT_NEAR(*bs1.limit(1.0), std::exp(-1.5), 1e-15);
  EXPECT_NEAR(rb[0].value / std::exp(-1.5), 1.0, 0.02);
}

TEST(Scaling, MonotoneConvergence) {
  for (const auto& [fam, s] : std::vector<std::pair<ScalingFamily, double>>{
           {{ScalingFamily::Kind::chebyshev1}, 1.0},
           {{ScalingFamily::Kind::bernstein_szego, 0.0}, 1.0},
           {{ScalingFamily::Kind::bernstein_szego, 1.0}, 1.0},
           {{ScalingFamily::Kind::bernstein_szego, 2.0}, 0.5},
           {{ScalingFamily::Kind::chebyshev2_q}, 1.0}}) {
    const auto rows = scaling_sequence(fam, s, {50, 100, 200, 400});
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(*rows[i].deviation, *rows[i - 1].deviation) << fam.name();
    EXPECT_LE(*rows.back().deviation, 0.02 * *rows.back().limit) << fam.name();
  }
}

TEST(Scaling, IndicatorAtZeroGap) {
  const auto rows = scaling_sequence({ScalingFamily::Kind::f0}, 0.0, {50, 100});
  for (const auto& r : rows) EXPECT_EQ(r.value, 1.0);
  EXPECT_FALSE(rows[0].limit.has_value());
}

TEST(Scaling, ChebyshevSecondKindQMatchesBernsteinSzego) {
  for (int n : {10, 100}) {
    const double a = toeplitz_logdet_product(ArcWeight::q_form(PolyFamily::chebyshev2(), 2.0 / n), n).logmag;
    const double b = toeplitz_logdet_product(ArcWeight::bernstein_szego(2.0 / n, 1.0), n).logmag;
    EXPECT_NEAR(a, b, 1e-9);
  }
}
