#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fds/linalg.hpp"
#include "fds/rng.hpp"
#include "fds/schedules.hpp"
#include "fds/velocity_field.hpp"

namespace fds {

enum class Solver { kEuler, kHeun };

Solver parse_solver(std::string_view name);
std::string to_string(Solver s);

// 0 = t_0 < ... < t_steps = 1, evenly spaced.
std::vector<double> uniform_grid(std::size_t steps);

// x + (t1 - t0) u(x, t0).
Vec euler_step(const VelocityField& field, const Vec& x, double t0, double t1);
// Trapezoidal predictor-corrector. Falls back to Euler when the field is not
// evaluable at t1; *fell_back reports it.
Vec heun_step(const VelocityField& field, const Vec& x, double t0, double t1,
              bool* fell_back = nullptr);

struct DivergenceConfig {
  DivergenceMethod method = DivergenceMethod::kExactBasis;
  Index probes = 1;
  ProbeKind probe = ProbeKind::kGaussian;
};

// "exact" | "hutch:<probes>" | "hutch-rademacher:<probes>"
DivergenceConfig parse_divergence(std::string_view text);
std::string to_string(const DivergenceConfig& d);

struct FdsConfig {
  Index m = 0;  // candidates besides the incumbent
  Index n = 0;  // refinement iterations
  SigmaSchedule sigma{};
  double t_trunc = 1.0;
  DivergenceConfig divergence{};

  bool enabled() const { return m > 0 && n > 0; }
  // Refinement runs at t only if enabled, t < t_trunc, and sigma_t > 0.
  bool active_at(double t) const;
  // Field evaluations one refine call costs at an active step.
  Index evals_per_refine(Index d) const;

  void validate() const;

  // Toy recipe: M = N = 1, constant sigma = 0.3 over the whole trajectory.
  static FdsConfig toy();
  // M = N = 1, cosine sigma decaying to zero at t_trunc = 0.5.
  static FdsConfig main_style(double sigma_max);
};

struct RefineIteration {
  double incumbent_divergence;
  double chosen_divergence;
  Index chosen_index;  // 0 = incumbent kept
};

struct RefineResult {
  Vec x;
  std::vector<RefineIteration> iterations;
  Index field_evals = 0;
};

// Zero-order local search: each iteration scores the incumbent and M
// Gaussian perturbations of scale sigma_t by their divergence and moves to
// the arg-min (ties keep the lowest index, so the incumbent wins ties).
// Hutchinson scoring shares one probe set across the candidates of an
// iteration.
RefineResult refine(const VelocityField& field, const Vec& x, double t, const FdsConfig& cfg, Rng& rng);

struct RefineLogEntry {
  Index step;
  Index sample;
  Index iteration;
  double incumbent_divergence;
  double chosen_divergence;
  Index chosen_index;
};

struct PipelineOptions {
  bool record_states = true;
  // Exact divergence at every state before/after refinement. Not part of
  // the NFE budget and consumes no randomness.
  bool diagnostics = true;
};

struct RunRecord {
  std::vector<double> grid;
  Solver solver = Solver::kEuler;
  FdsConfig fds{};
  std::uint64_t seed = 0;
  Index n = 0;
  Index d = 0;

  // states[k] is the solver state at grid[k]; refined[k] the state after
  // refinement at grid[k] (equal to states[k] on inactive steps).
  std::vector<Mat> states;
  std::vector<Mat> refined;
  std::vector<char> refined_step;
  Mat div_pre;   // [steps x n]
  Mat div_post;  // [steps x n]
  std::vector<RefineLogEntry> log;

  Index solver_evals = 0;  // summed over samples
  Index refine_evals = 0;
  bool heun_fallback = false;
  Mat final_samples;

  std::size_t steps() const { return grid.size() - 1; }
  Index total_evals() const { return solver_evals + refine_evals; }
  // Returns the recorded state at grid time t (exact grid match).
  const Mat& state_at(double t) const;
};

// Refine-then-step along the grid for n samples drawn from N(0, I).
// Sample i draws its prior from stream (seed, kPrior, i) and its refinement
// noise from (seed, kRefine, i), so runs with equal seeds share initial
// states regardless of the refinement settings.
RunRecord run_pipeline(const VelocityField& field, Solver solver, const std::vector<double>& grid,
                       const FdsConfig& cfg, Index n, std::uint64_t seed,
                       const PipelineOptions& options = {});

}  // namespace fds
