#include "fds/train.hpp"

#include <cmath>

#include "fds/errors.hpp"
#include "fds/rng.hpp"

namespace fds {

CfmBatch draw_cfm_batch(const TargetSpec& target, const Schedule& schedule, Index batch, Rng& rng) {
  const Mat x1 = sample_target(target, batch, rng());
  const Index d = x1.cols();
  const Mat x0 = sample_prior(batch, d, rng());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CfmBatch out{Mat(d + 1, batch), Mat(d, batch)};
  for (Index i = 0; i < batch; ++i) {
    const double t = unit(rng);
    const auto s = schedule.eval(t);
    out.inputs.col(i).head(d) = (s.alpha * x1.row(i) + s.beta * x0.row(i)).transpose();
    out.inputs(d, i) = t;
    out.targets.col(i) = (s.alpha_dot * x1.row(i) + s.beta_dot * x0.row(i)).transpose();
  }
  return out;
}

TrainResult train(const TrainConfig& cfg, const std::function<void(const CurvePoint&)>& on_log) {
  if (cfg.steps < 1 || cfg.batch < 1 || !(cfg.learning_rate > 0.0) || cfg.log_every < 1) {
    throw ConfigError("train needs steps >= 1, batch >= 1, learning rate > 0");
  }
  const Index d = target_dim(cfg.target);
  TrainResult result{MlpField::initialized(MlpField::default_widths(d, cfg.hidden, cfg.hidden_layers),
                                           stream_seed(cfg.seed, Stream::kInit)),
                     {}};
  MlpField& net = result.field;
  Rng rng = make_rng(cfg.seed, Stream::kTraining);

  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  Vec m = Vec::Zero(net.param_count());
  Vec v = Vec::Zero(net.param_count());
  Vec grad;
  double window = 0.0;
  std::size_t window_n = 0;
  double b1 = 1.0, b2 = 1.0;

  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    const auto batch = draw_cfm_batch(cfg.target, cfg.schedule, cfg.batch, rng);
    const double loss = net.loss_and_gradient(batch.inputs, batch.targets, &grad);
    if (!std::isfinite(loss) || !grad.allFinite()) throw TrainingError("training loss diverged", step);

    b1 *= kBeta1;
    b2 *= kBeta2;
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseAbs2();
    const double lr = cfg.learning_rate * std::sqrt(1.0 - b2) / (1.0 - b1);
    net.mutable_params().array() -= lr * m.array() / (v.array().sqrt() + kEps);

    window += loss;
    ++window_n;
    if (step % cfg.log_every == 0 || step == cfg.steps) {
      CurvePoint p{step, window / static_cast<double>(window_n)};
      result.curve.push_back(p);
      if (on_log) on_log(p);
      window = 0.0;
      window_n = 0;
    }
  }
  return result;
}

}  // namespace fds
