#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fds/linalg.hpp"
#include "fds/schedules.hpp"

namespace fds {

// Uniform over the 8 cells (i + j even) of a 4x4 board covering [-2,2]^2.
struct Checkerboard {};

struct GaussianMixture {
  std::vector<Vec> means;
  std::vector<double> weights;  // normalized on use
  std::vector<double> stddevs;  // isotropic, one per component
};

struct SinglePoint {
  Vec point;
};

struct PointFile {
  std::filesystem::path path;
};

using TargetSpec = std::variant<Checkerboard, GaussianMixture, SinglePoint, PointFile>;

enum class TargetKind { kCheckerboard, kGaussianMixture, kSinglePoint, kFile };

TargetKind kind_of(const TargetSpec& spec);
Index target_dim(const TargetSpec& spec);
std::string describe(const TargetSpec& spec);

// "checkerboard" | "gmm" (8-mode ring default) | "single:x,y,..." | "file:<path>"
TargetSpec parse_target(std::string_view text);

bool in_active_checker_cell(double x, double y);

// Finite set of target points x1^(k), stored one point per column for
// cache-friendly sweeps in the oracle field.
class EmpiricalTarget {
 public:
  EmpiricalTarget(Mat points_rows, TargetKind kind);

  Index size() const noexcept { return points_.cols(); }
  Index dim() const noexcept { return points_.rows(); }
  TargetKind kind() const noexcept { return kind_; }
  // [d x K]
  const Mat& columns() const noexcept { return points_; }
  Vec point(Index k) const { return points_.col(k); }

 private:
  Mat points_;
  TargetKind kind_;
};

// K draws from the target (single-point -> its one point, file -> all rows).
EmpiricalTarget build_empirical(const TargetSpec& spec, Index k, std::uint64_t seed);

// Plain floats, comma-separated, no header, one point per row.
Mat read_points_csv(const std::filesystem::path& path);

Mat sample_prior(Index n, Index d, std::uint64_t seed);
Mat sample_target(const TargetSpec& spec, Index n, std::uint64_t seed);

struct InterpolantSample {
  Vec x0;
  Vec x1;
  double t;
  Vec xt;
  Vec vt;
};

InterpolantSample draw_interpolant(const Schedule& schedule, const Vec& x0, const Vec& x1, double t);

// n independent draws x_t = alpha_t x1 + beta_t x0 with fresh (x0, x1).
Mat sample_path_points(const Schedule& schedule, const TargetSpec& spec, Index n, double t,
                       std::uint64_t seed);
// Same, with x1 drawn uniformly from a finite point set.
Mat sample_path_points(const Schedule& schedule, const EmpiricalTarget& target, Index n, double t,
                       std::uint64_t seed);

}  // namespace fds
