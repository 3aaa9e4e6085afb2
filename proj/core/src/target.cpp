#include "fds/target.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fds/errors.hpp"
#include "fds/rng.hpp"

namespace fds {
namespace {

constexpr double kBoardLo = -2.0;

GaussianMixture default_ring() {
  GaussianMixture g;
  for (int i = 0; i < 8; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / 8.0;
    Vec m(2);
    m << 2.0 * std::cos(angle), 2.0 * std::sin(angle);
    g.means.push_back(m);
    g.weights.push_back(1.0);
    g.stddevs.push_back(0.25);
  }
  return g;
}

std::vector<double> parse_floats(std::string_view text, char sep) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError("could not parse number '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw ParseError("trailing characters in number '" + item + "'");
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// Uniform point in one of the 8 active cells.
void draw_checker(Rng& rng, double& x, double& y) {
  std::uniform_int_distribution<int> cell(0, 7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int c = cell(rng);
  const int row = c / 2;                     // 0..3
  const int col = 2 * (c % 2) + (row % 2);   // keeps (row + col) even
  x = kBoardLo + col + unit(rng);
  y = kBoardLo + row + unit(rng);
}

Vec draw_gmm(const GaussianMixture& g, std::discrete_distribution<std::size_t>& pick, Rng& rng) {
  const std::size_t c = pick(rng);
  return g.means[c] + g.stddevs[c] * standard_normal(g.means[c].size(), rng);
}

void validate_gmm(const GaussianMixture& g) {
  if (g.means.empty()) throw ConfigError("gaussian mixture needs at least one component");
  if (g.weights.size() != g.means.size() || g.stddevs.size() != g.means.size()) {
    throw ConfigError("gaussian mixture means/weights/stddevs must have equal length");
  }
  for (const auto& m : g.means) {
    if (m.size() != g.means.front().size()) throw ShapeError("mixture means differ in dimension");
  }
  for (double w : g.weights) if (!(w > 0.0)) throw ConfigError("mixture weights must be positive");
  for (double s : g.stddevs) if (!(s >= 0.0)) throw ConfigError("mixture stddevs must be >= 0");
}

}  // namespace

TargetKind kind_of(const TargetSpec& spec) {
  return static_cast<TargetKind>(spec.index());
}

Index target_dim(const TargetSpec& spec) {
  return std::visit(
      [](const auto& s) -> Index {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Checkerboard>) return 2;
        else if constexpr (std::is_same_v<T, GaussianMixture>) return s.means.empty() ? 0 : s.means.front().size();
        else if constexpr (std::is_same_v<T, SinglePoint>) return s.point.size();
        else return read_points_csv(s.path).cols();
      },
      spec);
}

std::string describe(const TargetSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Checkerboard>) return "checkerboard";
        else if constexpr (std::is_same_v<T, GaussianMixture>) return "gmm";
        else if constexpr (std::is_same_v<T, SinglePoint>) {
          std::ostringstream os;
          os.precision(17);
          os << "single:";
          for (Index i = 0; i < s.point.size(); ++i) os << (i ? "," : "") << s.point[i];
          return os.str();
        } else return "file:" + s.path.string();
      },
      spec);
}

TargetSpec parse_target(std::string_view text) {
  if (text == "checkerboard") return Checkerboard{};
  if (text == "gmm") return default_ring();
  if (text.starts_with("single:")) {
    const auto values = parse_floats(text.substr(7), ',');
    if (values.empty()) throw ParseError("single: target needs coordinates");
    SinglePoint p{Vec(static_cast<Index>(values.size()))};
    for (std::size_t i = 0; i < values.size(); ++i) p.point[static_cast<Index>(i)] = values[i];
    return p;
  }
  if (text.starts_with("file:")) return PointFile{std::string(text.substr(5))};
  throw ConfigError("unknown target '" + std::string(text) +
                    "' (expected checkerboard|gmm|single:<coords>|file:<path>)");
}

bool in_active_checker_cell(double x, double y) {
  if (!(x >= -2.0 && x < 2.0 && y >= -2.0 && y < 2.0)) return false;
  const int col = static_cast<int>(std::floor(x - kBoardLo));
  const int row = static_cast<int>(std::floor(y - kBoardLo));
  return (row + col) % 2 == 0;
}

EmpiricalTarget::EmpiricalTarget(Mat points_rows, TargetKind kind)
    : points_(points_rows.transpose()), kind_(kind) {
  if (points_.cols() < 1 || points_.rows() < 1) throw ConfigError("empirical target needs K >= 1 points");
  if (!points_.allFinite()) throw ConfigError("empirical target contains non-finite points");
}

EmpiricalTarget build_empirical(const TargetSpec& spec, Index k, std::uint64_t seed) {
  switch (kind_of(spec)) {
    case TargetKind::kSinglePoint:
      return EmpiricalTarget(std::get<SinglePoint>(spec).point.transpose(), TargetKind::kSinglePoint);
    case TargetKind::kFile:
      return EmpiricalTarget(read_points_csv(std::get<PointFile>(spec).path), TargetKind::kFile);
    default:
      return EmpiricalTarget(sample_target(spec, k, stream_seed(seed, Stream::kTargetPoints)),
                             kind_of(spec));
  }
}

Mat read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open point file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      rows.push_back(parse_floats(line, ','));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (rows.back().size() != rows.front().size()) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(rows.front().size()) + " columns");
    }
  }
  if (rows.empty()) throw ParseError(path.string() + ": no points");
  Mat m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Mat sample_prior(Index n, Index d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw ShapeError("sample_prior needs n >= 1 and d >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat out(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) out(i, j) = normal(rng);
  return out;
}

Mat sample_target(const TargetSpec& spec, Index n, std::uint64_t seed) {
  if (n < 1) throw ShapeError("sample_target needs n >= 1");
  Rng rng(seed);
  switch (kind_of(spec)) {
    case TargetKind::kCheckerboard: {
      Mat out(n, 2);
      for (Index i = 0; i < n; ++i) draw_checker(rng, out(i, 0), out(i, 1));
      return out;
    }
    case TargetKind::kGaussianMixture: {
      const auto& g = std::get<GaussianMixture>(spec);
      validate_gmm(g);
      std::discrete_distribution<std::size_t> pick(g.weights.begin(), g.weights.end());
      Mat out(n, g.means.front().size());
      for (Index i = 0; i < n; ++i) out.row(i) = draw_gmm(g, pick, rng).transpose();
      return out;
    }
    case TargetKind::kSinglePoint: {
      const auto& p = std::get<SinglePoint>(spec).point;
      return p.transpose().replicate(n, 1);
    }
    case TargetKind::kFile: {
      const Mat pts = read_points_csv(std::get<PointFile>(spec).path);
      std::uniform_int_distribution<Index> pick(0, pts.rows() - 1);
      Mat out(n, pts.cols());
      for (Index i = 0; i < n; ++i) out.row(i) = pts.row(pick(rng));
      return out;
    }
  }
  throw ConfigError("unhandled target kind");
}

InterpolantSample draw_interpolant(const Schedule& schedule, const Vec& x0, const Vec& x1, double t) {
  if (x0.size() != x1.size()) throw ShapeError("x0 and x1 differ in dimension");
  const auto s = schedule.eval(t);
  return {x0, x1, t, s.alpha * x1 + s.beta * x0, s.alpha_dot * x1 + s.beta_dot * x0};
}

Mat sample_path_points(const Schedule& schedule, const TargetSpec& spec, Index n, double t,
                       std::uint64_t seed) {
  const auto s = schedule.eval(t);
  const Mat x1 = sample_target(spec, n, stream_seed(seed, Stream::kTargetPoints));
  const Mat x0 = sample_prior(n, x1.cols(), stream_seed(seed, Stream::kPrior));
  return s.alpha * x1 + s.beta * x0;
}

Mat sample_path_points(const Schedule& schedule, const EmpiricalTarget& target, Index n, double t,
                       std::uint64_t seed) {
  const auto s = schedule.eval(t);
  if (n < 1) throw ShapeError("sample_path_points needs n >= 1");
  Rng rng(stream_seed(seed, Stream::kTargetPoints));
  std::uniform_int_distribution<Index> pick(0, target.size() - 1);
  const Mat x0 = sample_prior(n, target.dim(), stream_seed(seed, Stream::kPrior));
  Mat out(n, target.dim());
  for (Index i = 0; i < n; ++i) {
    out.row(i) = s.alpha * target.columns().col(pick(rng)).transpose() + s.beta * x0.row(i);
  }
  return out;
}

}  // namespace fds
