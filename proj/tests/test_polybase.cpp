#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "arcdet/polybase.hpp"
#include "oracles.hpp"

using namespace arcdet;
using std::numbers::pi;

namespace {

std::vector<PolyFamily> all_families() {
  return {PolyFamily::chebyshev1(), PolyFamily::chebyshev2(), PolyFamily::legendre(),
          PolyFamily::bernstein_szego(0.9, 1.0), PolyFamily::bernstein_szego(0.6, 0.5),
          PolyFamily::bernstein_szego(0.99, 2.0)};
}

// Independent weight in the psi variable, w(cos psi) sin psi.
double oracle_weight_sin(const PolyFamily& f, double psi) {
  const double x = std::cos(psi), s = std::sin(psi);
  switch (f.family) {
    case Family::chebyshev1: return 1.0;
    case Family::chebyshev2: return s * s;
    case Family::legendre: return s;
    case Family::bernstein_szego: return s * s / (1.0 - std::pow(f.gamma, 2.0 * f.r * f.r) * x * x);
  }
  return 0.0;
}

}  // namespace

TEST(PolyFamily, Validation) {
  EXPECT_THROW(PolyFamily::bernstein_szego(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PolyFamily::bernstein_szego(1.2, 1.0), std::invalid_argument);
  EXPECT_THROW(PolyFamily::bernstein_szego(0.5, -0.1), std::invalid_argument);
  EXPECT_NO_THROW(PolyFamily::bernstein_szego(1.0, 0.0));
}

TEST(PolyFamily, ParameterA) {
  for (double g : {0.1, 0.5, 0.9, 0.999}) {
    for (double r : {0.0, 0.3, 1.0, 2.0, 5.0}) {
      const auto f = PolyFamily::bernstein_szego(g, r);
      const double q = std::pow(g, 2 * r * r);
      EXPECT_NEAR(f.q(), q, 1e-15);
      EXPECT_NEAR(f.a(), (1.0 - std::sqrt(1.0 - q)) / 2.0, 1e-12);
      EXPECT_GT(f.a(), 0.0);
      EXPECT_LE(f.a(), 0.5);
    }
  }
  EXPECT_EQ(PolyFamily::bernstein_szego(0.7, 0.0).a(), 0.5);
  EXPECT_EQ(PolyFamily::bernstein_szego(1.0, 3.0).a(), 0.5);
}

TEST(PolyFamily, WeightsPositive) {
  for (const auto& f : all_families()) {
    for (double x = -0.999; x < 1.0; x += 0.037) EXPECT_GT(f.weight(x), 0.0);
  }
  EXPECT_NEAR(PolyFamily::chebyshev1().weight(0.6), 1.0 / 0.8, 1e-15);
  EXPECT_NEAR(PolyFamily::chebyshev2().weight(0.6), 0.8, 1e-15);
  EXPECT_EQ(PolyFamily::legendre().weight(0.6), 1.0);
  const auto bs = PolyFamily::bernstein_szego(0.9, 1.0);
  EXPECT_NEAR(bs.weight(0.6), 0.8 / (1.0 - 0.81 * 0.36), 1e-15);
}

TEST(EvalMonic, SmallExamples) {
  EXPECT_NEAR(eval_monic(PolyFamily::chebyshev1(), 2, 0.0), -0.5, 1e-15);
  EXPECT_NEAR(eval_monic(PolyFamily::legendre(), 2, 0.0), -1.0 / 3.0, 1e-15);
  for (const auto& f : all_families()) EXPECT_EQ(eval_monic(f, 0, 0.3), 1.0);
  EXPECT_THROW(eval_monic(PolyFamily::legendre(), -1, 0.0), std::invalid_argument);
}

TEST(EvalMonic, ChebyshevAtInverseGamma) {
  const int n = 100;
  const double s = 1.0, gamma = std::cos(s / n);
  const double v = eval_monic(PolyFamily::chebyshev1(), n, 1.0 / gamma);
  const double target = std::pow(2.0, 1 - n) * std::cosh(s);
  EXPECT_NEAR(v / target, 1.0, 10.0 / (n * n));
}

TEST(EvalMonic, ChebyshevMatchesRecurrence) {
  for (int kind : {1, 2}) {
    const auto f = kind == 1 ? PolyFamily::chebyshev1() : PolyFamily::chebyshev2();
    for (int n = 0; n <= 40; ++n) {
      for (double x : {-1.3, -1.0, -0.77, -0.2, 0.0, 0.41, 0.93, 1.0, 1.0001, 1.05}) {
        const long double ref = oracle::chebyshev_monic_recurrence(kind, n, x);
        const double v = eval_monic(f, n, x);
        const double scale = std::max<double>(std::fabs(ref), std::ldexp(1.0, -n));
        EXPECT_NEAR(v, static_cast<double>(ref), 1e-12 * scale) << kind << " " << n << " " << x;
      }
    }
  }
}

TEST(EvalMonic, LegendreMatchesExplicitSum) {
  for (int n = 0; n <= 20; ++n) {
    for (double x : {-1.0, -0.6, -0.1, 0.0, 0.33, 0.8, 1.0, 1.002, 1.2}) {
      const double ref = oracle::legendre_explicit(n, x);
      const double v = eval_monic(PolyFamily::legendre(), n, x);
      const double scale = std::max<double>(std::fabs(ref), std::ldexp(1.0, -n));
      EXPECT_NEAR(v, ref, 1e-11 * scale) << n << " " << x;
    }
  }
}

TEST(EvalMonic, LegendreHighDegreeMatchesStdlib) {
  // monic scaled S_n = 4^n P_n / C(2n, n), in logs
  for (int n : {50, 300, 1000, 2000}) {
    const double log_lead = std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0) - 2.0 * n * std::numbers::ln2;
    const double factor = std::exp(-log_lead);  // 2^n monic / P_n = 2^n / lead
    for (double x : {-0.9, -0.3, 0.05, 0.5, 0.97, 1.0, 1.0 + 5.0 / (double(n) * n)}) {
      const double ref = std::legendre(n, std::min(x, 1.0)) * factor;
      if (x > 1.0) continue;  // stdlib legendre is confined to [-1, 1]
      const double v = eval_monic_scaled(PolyFamily::legendre(), n, x);
      // envelope of |S_n| on the interval is ~ factor/sqrt(n)
      EXPECT_NEAR(v, ref, 1e-11 * factor) << n << " " << x;
    }
  }
}

TEST(EvalMonic, Monicity) {
  // Chebyshev coefficients of S_n from n+1 Chebyshev nodes (exact for degree <= n);
  // monic P_n has leading Chebyshev coefficient 2^{1-n}, so S_n has c_n = 2.
  for (const auto& f : all_families()) {
    for (int n = 1; n <= 50; ++n) {
      const int N = n + 1;
      double cn = 0.0, norm = 0.0;
      for (int j = 0; j < N; ++j) {
        const double th = pi * (j + 0.5) / N;
        const double v = eval_monic_scaled(f, n, std::cos(th));
        cn += v * std::cos(n * th);
        norm = std::max(norm, std::fabs(v));
      }
      cn *= 2.0 / N;
      EXPECT_NEAR(cn, 2.0, 1e-9 * std::max(2.0, norm)) << to_string(f.family) << " n=" << n;
    }
  }
}

TEST(EvalMonic, Parity) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (const auto& f : all_families()) {
    for (int n = 0; n <= 30; ++n) {
      for (int i = 0; i < 100; ++i) {
        const double x = u(rng);
        const double a = eval_monic_scaled(f, n, x), b = eval_monic_scaled(f, n, -x);
        EXPECT_NEAR(b, (n % 2 ? -a : a), 1e-12 * std::max(1.0, std::fabs(a)));
      }
    }
  }
}

TEST(EvalMonic, BernsteinSzegoAtZeroRIsChebyshevFirstKind) {
  // r = 0 gives q = 1, so the weight sqrt(1-x^2)/(1-x^2) is the Chebyshev-1 weight
  for (double g : {0.3, 0.9}) {
    const auto bs = PolyFamily::bernstein_szego(g, 0.0);
    for (int n = 1; n <= 30; ++n) {
      for (double x : {-1.1, -0.5, 0.0, 0.2, 0.99, 1.0, 1.3}) {
        const double ref = eval_monic_scaled(PolyFamily::chebyshev1(), n, x);
        EXPECT_NEAR(eval_monic_scaled(bs, n, x), ref, 1e-12 * std::max(1.0, std::fabs(ref)));
      }
      EXPECT_NEAR(norm_h_log(bs, n), norm_h_log(PolyFamily::chebyshev1(), n), 1e-13);
    }
    EXPECT_NEAR(norm_h(bs, 0), pi, 1e-14);
  }
}

TEST(EvalMonic, BernsteinSzegoSmallQLimitIsChebyshevSecondKind) {
  const double g = 0.5;
  const double r = std::sqrt(std::log(1e12) / (2.0 * std::numbers::ln2));
  const auto bs = PolyFamily::bernstein_szego(g, r);
  ASSERT_NEAR(bs.q(), 1e-12, 1e-20);
  for (int n = 0; n <= 30; ++n) {
    for (double x : {-0.9, -0.4, 0.0, 0.6, 1.0}) {
      const double ref = eval_monic_scaled(PolyFamily::chebyshev2(), n, x);
      EXPECT_NEAR(eval_monic_scaled(bs, n, x), ref, 1e-11 * std::max(1.0, std::fabs(ref)));
    }
    EXPECT_NEAR(norm_h_log(bs, n), norm_h_log(PolyFamily::chebyshev2(), n), 1e-11);
  }
}

TEST(EvalMonic, LogAndScaledForms) {
  const auto f = PolyFamily::legendre();
  int sign = 0;
  const double lv = eval_monic_log(f, 1500, 1.0 + 1e-6, &sign);
  EXPECT_EQ(sign, 1);
  EXPECT_TRUE(std::isfinite(lv));
  EXPECT_NEAR(lv, std::log(eval_monic_scaled(f, 1500, 1.0 + 1e-6)) - 1500 * std::numbers::ln2, 1e-12);
  eval_monic_log(f, 3, -0.5, &sign);
  EXPECT_EQ(sign, eval_monic(f, 3, -0.5) > 0 ? 1 : -1);

  std::vector<double> all;
  for (const auto& fam : all_families()) {
    eval_monic_scaled_all(fam, 25, 0.37, all);
    ASSERT_EQ(all.size(), 26u);
    for (int n = 0; n <= 25; ++n) EXPECT_NEAR(all[n], eval_monic_scaled(fam, n, 0.37), 1e-13);
  }
}

TEST(Norms, ClosedForms) {
  EXPECT_NEAR(norm_h(PolyFamily::legendre(), 0), 2.0, 1e-15);
  EXPECT_NEAR(norm_h(PolyFamily::legendre(), 2), 8.0 / 45.0, 1e-15);
  EXPECT_NEAR(norm_h(PolyFamily::chebyshev2(), 0), pi / 2.0, 1e-15);
  EXPECT_NEAR(norm_h(PolyFamily::chebyshev1(), 0), pi, 1e-15);
  EXPECT_NEAR(norm_h(PolyFamily::chebyshev1(), 3), pi / 32.0, 1e-15);
  const auto bs = PolyFamily::bernstein_szego(0.8, 1.3);
  const double a = bs.a();
  EXPECT_NEAR(norm_h(bs, 3), pi / (2.0 * 64.0 * (1 - a) * (1 - a)), 1e-15);
  EXPECT_NEAR(norm_h(bs, 0), pi / (2.0 * (1 - a)), 1e-14);
  // log domain survives where C(2n, n) overflows
  EXPECT_TRUE(std::isfinite(norm_h_log(PolyFamily::legendre(), 1000)));
  EXPECT_NEAR(norm_h_log(PolyFamily::legendre(), 1000) + 2000 * std::numbers::ln2,
              std::log(pi), 1e-3);  // 4^n h_n -> pi
}

TEST(Norms, BruteForceGram) {
  // Simpson in psi over [0, pi], all weights smooth there
  for (const auto& f : all_families()) {
    for (int n = 0; n <= 8; ++n) {
      for (int m = 0; m <= n; ++m) {
        const double g = oracle::simpson_richardson(
            [&](double psi) {
              const double x = std::cos(psi);
              return eval_monic_scaled(f, n, x) * eval_monic_scaled(f, m, x) * oracle_weight_sin(f, psi);
            },
            0.0, pi, 4000);
        const double expected = (n == m) ? norm_h_scaled(f, n) : 0.0;
        EXPECT_NEAR(g, expected, 1e-10) << to_string(f.family) << " " << n << " " << m;
      }
    }
  }
}

TEST(Orthonormality, DefectExamples) {
  using K = QuadratureKind;
  EXPECT_LE(orthonormality_defect(PolyFamily::chebyshev1(), 10, make_rule(K::gauss_chebyshev_1, 64)), 1e-12);
  EXPECT_LE(orthonormality_defect(PolyFamily::bernstein_szego(0.9, 1.0), 8, make_rule(K::gauss_chebyshev_2, 128)),
            1e-10);
  EXPECT_LE(orthonormality_defect(PolyFamily::legendre(), 0, make_rule(K::gauss_legendre, 3)), 1e-14);
  for (const auto& f : all_families()) {
    EXPECT_LE(orthonormality_defect(f, 20, make_rule(matched_rule_kind(f), 200)), 1e-10) << to_string(f.family);
  }
}

TEST(Orthonormality, UndersizedRuleReportsLargerDefect) {
  const auto f = PolyFamily::legendre();
  EXPECT_GT(orthonormality_defect(f, 10, make_rule(QuadratureKind::gauss_legendre, 4)), 1e-3);
}
