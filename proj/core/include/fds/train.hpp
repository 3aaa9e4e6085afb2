#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fds/mlp_field.hpp"
#include "fds/schedules.hpp"
#include "fds/target.hpp"

namespace fds {

struct TrainConfig {
  std::size_t steps = 20000;
  Index batch = 512;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  TargetSpec target = Checkerboard{};
  Schedule schedule = Schedule::linear();
  Index hidden = 128;
  Index hidden_layers = 3;
  // One curve point per this many steps (mean loss over the window).
  std::size_t log_every = 100;
};

struct CurvePoint {
  std::size_t step;
  double loss;
};

struct TrainResult {
  MlpField field;
  std::vector<CurvePoint> curve;
};

// Adam on the CFM objective with fresh (x0, x1, t ~ U[0,1]) batches every
// step. Deterministic per seed. Throws TrainingError on a non-finite loss.
TrainResult train(const TrainConfig& cfg,
                  const std::function<void(const CurvePoint&)>& on_log = {});

// One batch laid out for MlpField::loss_and_gradient.
struct CfmBatch {
  Mat inputs;   // [(d+1) x B]
  Mat targets;  // [d x B]
};
CfmBatch draw_cfm_batch(const TargetSpec& target, const Schedule& schedule, Index batch, Rng& rng);

}  // namespace fds
