#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "fds/errors.hpp"
#include "fds/rng.hpp"
#include "fds/target.hpp"

namespace fds {
namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto p = std::filesystem::temp_directory_path() / ("fdslab_" + name);
  std::ofstream(p) << contents;
  return p;
}

// Two-sample energy-distance permutation test (test-only oracle for "same
// distribution"). Returns the permutation p-value.
double energy_permutation_p(const Mat& a, const Mat& b, int permutations, std::uint64_t seed) {
  const Index na = a.rows(), n = a.rows() + b.rows();
  Mat pooled(n, a.cols());
  pooled << a, b;
  Mat dist(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) dist(i, j) = (pooled.row(i) - pooled.row(j)).norm();
  auto stat = [&](const std::vector<Index>& idx) {
    double ab = 0, aa = 0, bb = 0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const bool ia = i < na, ja = j < na;
        const double d = dist(idx[i], idx[j]);
        if (ia && ja) aa += d;
        else if (!ia && !ja) bb += d;
        else ab += d;
      }
    const double nb = static_cast<double>(n - na);
    return ab / (na * nb) - aa / (double(na) * na) - bb / (nb * nb);
  };
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  const double observed = stat(idx);
  Rng rng(seed);
  int at_least = 1;
  for (int p = 0; p < permutations; ++p) {
    std::shuffle(idx.begin(), idx.end(), rng);
    if (stat(idx) >= observed) ++at_least;
  }
  return at_least / static_cast<double>(permutations + 1);
}

TEST(SamplePrior, DeterministicPerSeed) {
  EXPECT_EQ(sample_prior(4, 2, 7), sample_prior(4, 2, 7));
  EXPECT_NE(sample_prior(4, 2, 7), sample_prior(4, 2, 8));
  EXPECT_THROW(sample_prior(0, 2, 1), ShapeError);
}

TEST(SamplePrior, MomentsOverAMillionDraws) {
  const Mat x = sample_prior(1000000, 2, 11);
  for (Index j = 0; j < 2; ++j) {
    const double mean = x.col(j).mean();
    const double var = (x.col(j).array() - mean).square().mean();
    EXPECT_NEAR(mean, 0.0, 0.005);
    EXPECT_NEAR(var, 1.0, 0.01);
  }
}

TEST(SampleTarget, SinglePointCopies) {
  const Mat x = sample_target(parse_target("single:1,-1"), 3, 5);
  ASSERT_EQ(x.rows(), 3);
  for (Index i = 0; i < 3; ++i) {
    EXPECT_EQ(x(i, 0), 1.0);
    EXPECT_EQ(x(i, 1), -1.0);
  }
}

TEST(SampleTarget, CheckerboardStaysInActiveCells) {
  const Mat x = sample_target(Checkerboard{}, 100000, 3);
  std::array<int, 16> hits{};
  for (Index i = 0; i < x.rows(); ++i) {
    ASSERT_TRUE(in_active_checker_cell(x(i, 0), x(i, 1))) << x.row(i);
    hits[static_cast<std::size_t>(std::floor(x(i, 1) + 2) * 4 + std::floor(x(i, 0) + 2))]++;
  }
  int active = 0;
  for (int h : hits) {
    if (h > 0) {
      ++active;
      EXPECT_NEAR(h, 100000 / 8, 600);
    }
  }
  EXPECT_EQ(active, 8);
}

TEST(SampleTarget, SymmetricMixtureMean) {
  GaussianMixture g;
  Vec m1(2), m2(2);
  m1 << -3, 0;
  m2 << 3, 0;
  g.means = {m1, m2};
  g.weights = {1, 1};
  g.stddevs = {1, 1};
  const Mat x = sample_target(g, 1000000, 9);
  EXPECT_NEAR(x.col(0).mean(), 0.0, 0.01);
  EXPECT_NEAR(x.col(1).mean(), 0.0, 0.01);
}

TEST(SampleTarget, DeterministicPerSeed) {
  EXPECT_EQ(sample_target(Checkerboard{}, 50, 4), sample_target(Checkerboard{}, 50, 4));
  EXPECT_EQ(sample_target(parse_target("gmm"), 50, 4), sample_target(parse_target("gmm"), 50, 4));
}

TEST(TargetFile, ReadsCsvAndRejectsMalformedRows) {
  const auto good = temp_file("good.csv", "1.5,2\n-3,4e-1\n\n0,0\n");
  const Mat m = read_points_csv(good);
  ASSERT_EQ(m.rows(), 3);
  EXPECT_EQ(m(0, 0), 1.5);
  EXPECT_EQ(m(1, 1), 0.4);
  const auto ragged = temp_file("ragged.csv", "1,2\n3\n");
  EXPECT_THROW(read_points_csv(ragged), ParseError);
  const auto junk = temp_file("junk.csv", "1,abc\n");
  EXPECT_THROW(read_points_csv(junk), ParseError);
  const auto header = temp_file("header.csv", "x,y\n1,2\n");
  EXPECT_THROW(sample_target(PointFile{header}, 2, 1), ParseError);
  EXPECT_THROW(read_points_csv("/nonexistent/points.csv"), ParseError);

  const auto emp = build_empirical(PointFile{good}, 0, 0);
  EXPECT_EQ(emp.size(), 3);
  EXPECT_EQ(emp.dim(), 2);
}

TEST(TargetSpecParsing, KnownForms) {
  EXPECT_EQ(kind_of(parse_target("checkerboard")), TargetKind::kCheckerboard);
  EXPECT_EQ(kind_of(parse_target("gmm")), TargetKind::kGaussianMixture);
  EXPECT_EQ(target_dim(parse_target("single:1,2,3")), 3);
  EXPECT_EQ(describe(parse_target("single:1,-1")), "single:1,-1");
  EXPECT_THROW(parse_target("moons"), ConfigError);
  EXPECT_THROW(parse_target("single:"), ParseError);
}

TEST(Interpolant, ArithmeticAndBoundaries) {
  const auto s = Schedule::linear();
  Vec x0(2), x1(2);
  x0 << 0, 0;
  x1 << 2, 2;
  auto smp = draw_interpolant(s, x0, x1, 0.5);
  EXPECT_EQ(smp.xt, Vec::Constant(2, 1.0));
  EXPECT_EQ(smp.vt, Vec::Constant(2, 2.0));

  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec a = standard_normal(3, rng), b = standard_normal(3, rng);
    std::uniform_real_distribution<double> u(0, 1);
    const double t = u(rng);
    const auto v = s.eval(t);
    const auto p = draw_interpolant(s, a, b, t);
    EXPECT_EQ((p.xt - (v.alpha * b + v.beta * a)).norm(), 0.0);
    EXPECT_EQ((p.vt - (v.alpha_dot * b + v.beta_dot * a)).norm(), 0.0);
    EXPECT_EQ(draw_interpolant(s, a, b, 0.0).xt, a);
    EXPECT_EQ(draw_interpolant(s, a, b, 1.0).xt, b);
    EXPECT_EQ(draw_interpolant(s, a, b, 1.0).vt, b - a);
  }
  EXPECT_THROW(draw_interpolant(s, Vec::Zero(2), Vec::Zero(3), 0.5), ShapeError);
}

TEST(PathPoints, StartIsStandardNormal) {
  const Mat x = sample_path_points(Schedule::linear(), Checkerboard{}, 1000000, 0.0, 2);
  for (Index j = 0; j < 2; ++j) {
    const double mean = x.col(j).mean();
    EXPECT_NEAR((x.col(j).array() - mean).square().mean(), 1.0, 0.01);
  }
}

TEST(PathPoints, SinglePointVarianceIsBetaSquared) {
  const Mat x = sample_path_points(Schedule::linear(), parse_target("single:0,0"), 1000000, 0.5, 2);
  for (Index j = 0; j < 2; ++j) {
    const double mean = x.col(j).mean();
    EXPECT_NEAR((x.col(j).array() - mean).square().mean(), 0.25, 0.0025);
  }
}

TEST(PathPoints, EndMatchesTargetDistribution) {
  const Mat end = sample_path_points(Schedule::linear(), Checkerboard{}, 600, 1.0, 5);
  const Mat ref = sample_target(Checkerboard{}, 600, 99);
  EXPECT_GT(energy_permutation_p(end, ref, 199, 1), 0.01);
  // The test has power: the prior is rejected against the same reference.
  EXPECT_LT(energy_permutation_p(sample_prior(600, 2, 17), ref, 199, 1), 0.01);
  for (Index i = 0; i < end.rows(); ++i) EXPECT_TRUE(in_active_checker_cell(end(i, 0), end(i, 1)));
}

TEST(Rng, StreamSeedsAreDistinct) {
  EXPECT_NE(stream_seed(1, Stream::kPrior, 0), stream_seed(1, Stream::kPrior, 1));
  EXPECT_NE(stream_seed(1, Stream::kPrior, 0), stream_seed(1, Stream::kRefine, 0));
  EXPECT_EQ(stream_seed(1, Stream::kPrior, 3), stream_seed(1, Stream::kPrior, 3));
}

}  // namespace
}  // namespace fds
