#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fds/linalg.hpp"
#include "fds/oracle_field.hpp"
#include "fds/sampler.hpp"
#include "fds/schedules.hpp"
#include "fds/target.hpp"
#include "fds/velocity_field.hpp"

namespace fds {

enum class WassersteinMethod { kAuto, kExact, kSliced };

WassersteinMethod parse_wasserstein_method(std::string_view name);
std::string to_string(WassersteinMethod m);

struct WassersteinResult {
  double value = 0.0;
  WassersteinMethod method = WassersteinMethod::kExact;
  Index projections = 0;
  Index n = 0;
};

// Exact assignment is used for auto when both clouds have n <= 512 points.
constexpr Index kExactAssignmentLimit = 512;
constexpr Index kDefaultProjections = 128;

// 2-Wasserstein between equal-size clouds via optimal matching on squared
// Euclidean cost. Throws ShapeError on unequal sizes.
double w2_exact(const Mat& a, const Mat& b);
// 1-D W2 between empirical distributions (sizes may differ).
double w2_1d(std::vector<double> a, std::vector<double> b);
// Sliced W2 over random unit directions, scaled by sqrt(d) so that its
// expectation over directions equals W2 for translations and for clouds
// embedded on a line.
double w2_sliced(const Mat& a, const Mat& b, Index projections, std::uint64_t seed);

WassersteinResult wasserstein(const Mat& a, const Mat& b, WassersteinMethod method = WassersteinMethod::kAuto,
                              Index projections = kDefaultProjections, std::uint64_t seed = 0);

// Axis-aligned 2-D grid; cell (iy, ix) is evaluated at its center.
struct GridSpec {
  double x_lo = -2.0, x_hi = 2.0, y_lo = -2.0, y_hi = 2.0;
  Index resolution = 64;
  Vec point(Index iy, Index ix) const;
  void validate() const;
};

enum class MapMode { kGroundTruth, kSurrogate };
std::string to_string(MapMode m);

struct DiscrepancyMap {
  GridSpec grid;
  double t = 0.0;
  MapMode mode = MapMode::kGroundTruth;
  Mat values;  // [resolution x resolution], values(iy, ix)
};

// Posterior-weighted residual sum per cell.
DiscrepancyMap discrepancy_map_gt(const OracleField& oracle, const GridSpec& grid, double t);
// The divergence form evaluated with the field's own divergence.
DiscrepancyMap discrepancy_map_surrogate(const VelocityField& field, const Schedule& schedule,
                                         const GridSpec& grid, double t);
// The same map from the oracle's split divergence, which avoids cancelling
// a_t d against itself where the posterior is nearly a point mass.
DiscrepancyMap discrepancy_map_surrogate(const OracleField& oracle, const GridSpec& grid, double t);
// Header comments: bounds, resolution, t, mode; then one CSV line per grid row.
void write_map_csv(const std::filesystem::path& path, const DiscrepancyMap& map);

double pearson(const Vec& a, const Vec& b);
// Pearson on average ranks (ties share their mean rank).
double spearman(const Vec& a, const Vec& b);
Vec average_ranks(const Vec& v);
double spearman(const DiscrepancyMap& a, const DiscrepancyMap& b);

struct PairedTTest {
  Index n = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double t_statistic = 0.0;
  double p_two_sided = 1.0;
};
PairedTTest paired_t_test(const std::vector<double>& differences);

struct WdRow {
  double t;
  double wd_baseline;
  double wd_fds;  // NaN when unpaired
};

struct WdSeries {
  std::vector<WdRow> rows;
  WassersteinMethod method = WassersteinMethod::kExact;
  Index n = 0;
  std::uint64_t seed = 0;
  bool paired = false;
};

// Exact-path draws at time t; the stream depends only on (seed, t), so every
// caller comparing against time t under one seed sees the same cloud.
Mat reference_path_samples(const Schedule& schedule, const TargetSpec& target, Index n, double t,
                           std::uint64_t seed);

// W2 between recorded states and fresh exact-path samples at each time. The
// same reference cloud serves both runs when paired.
WdSeries wd_over_time(const RunRecord& baseline, const RunRecord* fds, const TargetSpec& target,
                      const Schedule& schedule, const std::vector<double>& times, Index n_ref,
                      std::uint64_t seed, WassersteinMethod method = WassersteinMethod::kAuto);
void write_wd_csv(const std::filesystem::path& path, const WdSeries& series);

}  // namespace fds
