#include <bit>
#include "fds/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "fds/assignment.hpp"
#include "fds/csv.hpp"
#include "fds/errors.hpp"
#include "fds/rng.hpp"

namespace fds {

WassersteinMethod parse_wasserstein_method(std::string_view name) {
  if (name == "auto") return WassersteinMethod::kAuto;
  if (name == "exact") return WassersteinMethod::kExact;
  if (name == "sliced") return WassersteinMethod::kSliced;
  throw ConfigError("unknown wasserstein method '" + std::string(name) + "' (expected auto|exact|sliced)");
}

std::string to_string(WassersteinMethod m) {
  switch (m) {
    case WassersteinMethod::kAuto: return "auto";
    case WassersteinMethod::kExact: return "exact";
    case WassersteinMethod::kSliced: return "sliced";
  }
  return "unknown";
}

double w2_exact(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw ShapeError("exact W2 needs clouds of equal size");
  if (a.cols() != b.cols()) throw ShapeError("clouds differ in dimension");
  if (a.rows() < 1) throw ShapeError("W2 needs at least one point");
  const Index n = a.rows();
  Mat cost(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) cost(i, j) = (a.row(i) - b.row(j)).squaredNorm();
  const auto match = solve_assignment(cost);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) total += cost(i, match[static_cast<std::size_t>(i)]);
  return std::sqrt(total / static_cast<double>(n));
}

double w2_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ShapeError("W2 needs at least one point");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() == b.size()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
  }
  // Integrate the squared difference of the two quantile step functions.
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double pos = 0.0, s = 0.0;
  while (i < a.size() && j < b.size()) {
    const double next = std::min((i + 1) / na, (j + 1) / nb);
    s += (next - pos) * (a[i] - b[j]) * (a[i] - b[j]);
    pos = next;
    if ((i + 1) / na <= next) ++i;
    if ((j + 1) / nb <= next) ++j;
  }
  return std::sqrt(s);
}

double w2_sliced(const Mat& a, const Mat& b, Index projections, std::uint64_t seed) {
  if (a.cols() != b.cols()) throw ShapeError("clouds differ in dimension");
  if (projections < 1) throw ConfigError("sliced W2 needs at least one projection");
  const Index d = a.cols();
  Rng rng = make_rng(seed, Stream::kProjection);
  double total = 0.0;
  std::vector<double> pa(static_cast<std::size_t>(a.rows())), pb(static_cast<std::size_t>(b.rows()));
  for (Index p = 0; p < projections; ++p) {
    Vec dir = standard_normal(d, rng);
    dir.normalize();
    for (Index i = 0; i < a.rows(); ++i) pa[static_cast<std::size_t>(i)] = a.row(i).dot(dir);
    for (Index i = 0; i < b.rows(); ++i) pb[static_cast<std::size_t>(i)] = b.row(i).dot(dir);
    const double w = w2_1d(pa, pb);
    total += w * w;
  }
  return std::sqrt(static_cast<double>(d) * total / static_cast<double>(projections));
}

WassersteinResult wasserstein(const Mat& a, const Mat& b, WassersteinMethod method, Index projections,
                              std::uint64_t seed) {
  if (method == WassersteinMethod::kAuto) {
    method = (a.rows() == b.rows() && a.rows() <= kExactAssignmentLimit) ? WassersteinMethod::kExact
                                                                          : WassersteinMethod::kSliced;
  }
  if (method == WassersteinMethod::kExact) return {w2_exact(a, b), method, 0, a.rows()};
  return {w2_sliced(a, b, projections, seed), method, projections, a.rows()};
}

Vec GridSpec::point(Index iy, Index ix) const {
  Vec p(2);
  p << x_lo + (static_cast<double>(ix) + 0.5) * (x_hi - x_lo) / static_cast<double>(resolution),
      y_lo + (static_cast<double>(iy) + 0.5) * (y_hi - y_lo) / static_cast<double>(resolution);
  return p;
}

void GridSpec::validate() const {
  if (resolution < 1) throw ConfigError("map resolution must be >= 1");
  if (!(x_hi > x_lo) || !(y_hi > y_lo)) throw ConfigError("map bounds must satisfy lo < hi");
}

std::string to_string(MapMode m) { return m == MapMode::kGroundTruth ? "gt" : "surrogate"; }

namespace {

void check_map_time(double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("discrepancy maps need t in (0,1), got " + std::to_string(t));
}

}  // namespace

DiscrepancyMap discrepancy_map_gt(const OracleField& oracle, const GridSpec& grid, double t) {
  grid.validate();
  check_map_time(t);
  if (oracle.dim() != 2) throw ShapeError("discrepancy maps are defined for 2-D targets");
  DiscrepancyMap map{grid, t, MapMode::kGroundTruth, Mat(grid.resolution, grid.resolution)};
  for (Index iy = 0; iy < grid.resolution; ++iy)
    for (Index ix = 0; ix < grid.resolution; ++ix)
      map.values(iy, ix) = oracle.discrepancy_exact(grid.point(iy, ix), t).lhs;
  return map;
}

DiscrepancyMap discrepancy_map_surrogate(const OracleField& oracle, const GridSpec& grid, double t) {
  grid.validate();
  check_map_time(t);
  if (oracle.dim() != 2) throw ShapeError("discrepancy maps are defined for 2-D targets");
  DiscrepancyMap map{grid, t, MapMode::kSurrogate, Mat(grid.resolution, grid.resolution)};
  for (Index iy = 0; iy < grid.resolution; ++iy)
    for (Index ix = 0; ix < grid.resolution; ++ix)
      map.values(iy, ix) = oracle.discrepancy_exact(grid.point(iy, ix), t).rhs_theorem;
  return map;
}

DiscrepancyMap discrepancy_map_surrogate(const VelocityField& field, const Schedule& schedule,
                                         const GridSpec& grid, double t) {
  grid.validate();
  check_map_time(t);
  if (field.dim() != 2) throw ShapeError("discrepancy maps are defined for 2-D fields");
  const auto s = schedule.eval(t);
  DiscrepancyMap map{grid, t, MapMode::kSurrogate, Mat(grid.resolution, grid.resolution)};
  for (Index iy = 0; iy < grid.resolution; ++iy)
    for (Index ix = 0; ix < grid.resolution; ++ix)
      map.values(iy, ix) = theorem_rhs(s, field.divergence(grid.point(iy, ix), t), 2);
  return map;
}

void write_map_csv(const std::filesystem::path& path, const DiscrepancyMap& map) {
  CsvWriter out(path);
  const auto& g = map.grid;
  out.comment("bounds=" + format_double(g.x_lo) + "," + format_double(g.x_hi) + "," + format_double(g.y_lo) +
              "," + format_double(g.y_hi));
  out.comment("resolution=" + std::to_string(g.resolution));
  out.comment("t=" + format_double(map.t));
  out.comment("mode=" + to_string(map.mode));
  out.comment("layout=row-major, row iy (y ascending), column ix (x ascending), cell centers");
  for (Index iy = 0; iy < map.values.rows(); ++iy) {
    for (Index ix = 0; ix < map.values.cols(); ++ix) out.cell(map.values(iy, ix));
    out.end_row();
  }
  out.close();
}

double pearson(const Vec& a, const Vec& b) {
  if (a.size() != b.size() || a.size() < 2) throw ShapeError("correlation needs equal-length inputs (n >= 2)");
  const Vec ca = a.array() - a.mean();
  const Vec cb = b.array() - b.mean();
  const double denom = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return ca.dot(cb) / denom;
}

Vec average_ranks(const Vec& v) {
  const Index n = v.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return v[i] < v[j]; });
  Vec ranks(n);
  for (Index i = 0; i < n;) {
    Index j = i;
    while (j + 1 < n && v[order[static_cast<std::size_t>(j + 1)]] == v[order[static_cast<std::size_t>(i)]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index k = i; k <= j; ++k) ranks[order[static_cast<std::size_t>(k)]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(const Vec& a, const Vec& b) { return pearson(average_ranks(a), average_ranks(b)); }

double spearman(const DiscrepancyMap& a, const DiscrepancyMap& b) {
  const Vec va = Eigen::Map<const Vec>(a.values.data(), a.values.size());
  const Vec vb = Eigen::Map<const Vec>(b.values.data(), b.values.size());
  return spearman(va, vb);
}

PairedTTest paired_t_test(const std::vector<double>& differences) {
  PairedTTest r;
  r.n = static_cast<Index>(differences.size());
  if (r.n < 2) throw ConfigError("paired t-test needs at least two pairs");
  r.mean = std::accumulate(differences.begin(), differences.end(), 0.0) / static_cast<double>(r.n);
  double ss = 0.0;
  for (double d : differences) ss += (d - r.mean) * (d - r.mean);
  const double sd = std::sqrt(ss / static_cast<double>(r.n - 1));
  r.stderr_ = sd / std::sqrt(static_cast<double>(r.n));
  if (r.stderr_ == 0.0) {
    r.t_statistic = r.mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.mean);
    r.p_two_sided = r.mean == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.t_statistic = r.mean / r.stderr_;
  boost::math::students_t dist(static_cast<double>(r.n - 1));
  r.p_two_sided = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t_statistic)));
  return r;
}

Mat reference_path_samples(const Schedule& schedule, const TargetSpec& target, Index n, double t,
                           std::uint64_t seed) {
  return sample_path_points(schedule, target, n, t,
                            stream_seed(seed, Stream::kReference, std::bit_cast<std::uint64_t>(t)));
}

WdSeries wd_over_time(const RunRecord& baseline, const RunRecord* fds, const TargetSpec& target,
                      const Schedule& schedule, const std::vector<double>& times, Index n_ref,
                      std::uint64_t seed, WassersteinMethod method) {
  WdSeries series;
  series.seed = seed;
  series.paired = fds != nullptr;
  series.n = baseline.n;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const Mat& base_states = baseline.state_at(t);
    const Mat reference = reference_path_samples(schedule, target, n_ref, t, seed);
    const auto wb = wasserstein(base_states, reference, method, kDefaultProjections, seed);
    series.method = wb.method;
    WdRow row{t, wb.value, std::numeric_limits<double>::quiet_NaN()};
    if (fds) row.wd_fds = wasserstein(fds->state_at(t), reference, method, kDefaultProjections, seed).value;
    series.rows.push_back(row);
  }
  return series;
}

void write_wd_csv(const std::filesystem::path& path, const WdSeries& series) {
  CsvWriter out(path);
  if (series.paired) {
    out.header({"t", "wd_baseline", "wd_fds", "method", "n", "seed"});
  } else {
    out.header({"t", "wd", "method", "n", "seed"});
  }
  for (const auto& r : series.rows) {
    out.cell(r.t).cell(r.wd_baseline);
    if (series.paired) out.cell(r.wd_fds);
    out.cell(to_string(series.method)).cell(static_cast<long long>(series.n)).cell(std::to_string(series.seed));
    out.end_row();
  }
  out.close();
}

}  // namespace fds
