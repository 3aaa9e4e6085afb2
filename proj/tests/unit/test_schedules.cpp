#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fds/errors.hpp"
#include "fds/schedules.hpp"

namespace fds {
namespace {

Schedule sine_table() {
  // alpha = sin(pi t / 2), beta = cos(pi t / 2), tabulated on 41 knots.
  std::vector<double> k, a, b;
  for (int i = 0; i <= 40; ++i) {
    const double t = i / 40.0;
    k.push_back(t);
    a.push_back(i == 40 ? 1.0 : std::sin(0.5 * std::numbers::pi * t));
    b.push_back(i == 40 ? 0.0 : std::cos(0.5 * std::numbers::pi * t));
  }
  return Schedule::table(k, a, b);
}

TEST(Schedule, LinearBoundaryAndInteriorValues) {
  const auto s = Schedule::linear();
  auto v = s.eval(0.0);
  EXPECT_EQ(v.alpha, 0.0);
  EXPECT_EQ(v.beta, 1.0);
  EXPECT_EQ(v.alpha_dot, 1.0);
  EXPECT_EQ(v.beta_dot, -1.0);
  v = s.eval(1.0);
  EXPECT_EQ(v.alpha, 1.0);
  EXPECT_EQ(v.beta, 0.0);
  v = s.eval(0.25);
  EXPECT_EQ(v.alpha, 0.25);
  EXPECT_EQ(v.beta, 0.75);
}

TEST(Schedule, RejectsTimeOutsideUnitInterval) {
  const auto s = Schedule::linear();
  EXPECT_THROW(s.eval(-0.01), DomainError);
  EXPECT_THROW(s.eval(1.5), DomainError);
  EXPECT_THROW(s.eval(std::nan("")), DomainError);
}

TEST(Schedule, LinearFieldCoefficients) {
  const auto s = Schedule::linear();
  auto c = s.coeffs(0.5);
  EXPECT_DOUBLE_EQ(c.a, -2.0);
  EXPECT_DOUBLE_EQ(c.b, 2.0);
  c = s.coeffs(0.9);
  EXPECT_NEAR(c.a, -10.0, 1e-12);
  EXPECT_NEAR(c.b, 10.0, 1e-12);
  EXPECT_THROW(s.coeffs(1.0), SingularityError);
}

TEST(Schedule, CoefficientIdentitiesHold) {
  for (const auto& s : {Schedule::linear(), sine_table()}) {
    for (double t = 0.01; t < 0.99; t += 0.0137) {
      const auto v = s.eval(t);
      const auto c = s.coeffs(t);
      EXPECT_NEAR(c.a * v.beta, v.beta_dot, 1e-14 * (1 + std::abs(v.beta_dot)));
      EXPECT_NEAR(c.b, v.alpha_dot - v.alpha * c.a, 1e-12 * (1 + std::abs(c.b)));
    }
  }
}

TEST(Schedule, DerivativesMatchFiniteDifferences) {
  constexpr double h = 1e-6;
  for (const auto& s : {Schedule::linear(), sine_table()}) {
    for (double t = 0.01; t <= 0.99; t += 0.0049) {
      const auto v = s.eval(t);
      const double fa = (s.eval(t + h).alpha - s.eval(t - h).alpha) / (2 * h);
      const double fb = (s.eval(t + h).beta - s.eval(t - h).beta) / (2 * h);
      EXPECT_NEAR(fa, v.alpha_dot, 1e-6 * std::abs(v.alpha_dot)) << s.name() << " t=" << t;
      EXPECT_NEAR(fb, v.beta_dot, 1e-6 * std::abs(v.beta_dot)) << s.name() << " t=" << t;
    }
  }
}

TEST(Schedule, TableIsMonotoneWithPinnedEndpoints) {
  const auto s = sine_table();
  EXPECT_EQ(s.eval(0.0).alpha, 0.0);
  EXPECT_EQ(s.eval(0.0).beta, 1.0);
  EXPECT_EQ(s.eval(1.0).alpha, 1.0);
  EXPECT_EQ(s.eval(1.0).beta, 0.0);
  double prev_a = -1, prev_b = 2;
  for (double t = 0; t <= 1.0; t += 0.001) {
    const auto v = s.eval(t);
    EXPECT_GT(v.alpha, prev_a);
    EXPECT_LT(v.beta, prev_b);
    prev_a = v.alpha;
    prev_b = v.beta;
  }
  // Tabulated sine schedule tracks the closed form closely.
  EXPECT_NEAR(s.eval(0.3).alpha, std::sin(0.15 * std::numbers::pi), 1e-5);
}

TEST(Schedule, TableRejectsBadInput) {
  EXPECT_THROW(Schedule::table({0, 1}, {0, 1}, {1, 0.5}), ConfigError);
  EXPECT_THROW(Schedule::table({0, 0.5, 1}, {0, 0.6, 1}, {1, 1.2, 0}), ConfigError);
  EXPECT_THROW(Schedule::table({0, 0.7, 0.5, 1}, {0, .2, .5, 1}, {1, .8, .5, 0}), ConfigError);
  EXPECT_THROW(parse_schedule("vp"), ConfigError);
}

TEST(SigmaSchedule, ShapeAndBoundaryExamples) {
  EXPECT_EQ(sigma_at({SigmaKind::kCosine, 0.01}, 0.6, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(sigma_at({SigmaKind::kConstant, 0.3}, 0.3, 1.0), 0.3);
  EXPECT_DOUBLE_EQ(sigma_at({SigmaKind::kCosine, 0.2}, 0.0, 0.5), 0.2);
  EXPECT_THROW(sigma_at({SigmaKind::kLinear, -0.1}, 0.1, 0.5), ConfigError);
}

TEST(SigmaSchedule, ShapesAreZeroPastTruncationAndPositiveBefore) {
  for (auto kind : {SigmaKind::kCosine, SigmaKind::kLinear, SigmaKind::kConcave, SigmaKind::kConstant}) {
    const SigmaSchedule sig{kind, 0.4};
    for (double t_trunc : {0.25, 0.5, 1.0}) {
      double prev = 1e9;
      for (double t = 0.0; t <= 1.0; t += 0.01) {
        const double s = sigma_at(sig, t, t_trunc);
        EXPECT_GE(s, 0.0);
        if (t >= t_trunc) {
          EXPECT_EQ(s, 0.0);
        } else {
          EXPECT_GT(s, 0.0);
          EXPECT_LE(s, prev);  // non-increasing (constant kind: equal)
          prev = s;
        }
      }
    }
  }
  // Concave shape lies below linear.
  EXPECT_LT(sigma_at({SigmaKind::kConcave, 1.0}, 0.25, 0.5), sigma_at({SigmaKind::kLinear, 1.0}, 0.25, 0.5));
  EXPECT_EQ(sigma_at({SigmaKind::kConstant, 0.3}, 0.0, 0.0), 0.0);
}

TEST(SigmaSchedule, ParsesKinds) {
  EXPECT_EQ(parse_sigma_kind("cosine"), SigmaKind::kCosine);
  EXPECT_EQ(parse_sigma_kind("concave"), SigmaKind::kConcave);
  EXPECT_EQ(to_string(parse_sigma_kind("linear")), "linear");
  EXPECT_THROW(parse_sigma_kind("exp"), ConfigError);
}

}  // namespace
}  // namespace fds
