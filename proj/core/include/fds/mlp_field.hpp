#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fds/linalg.hpp"
#include "fds/target.hpp"
#include "fds/velocity_field.hpp"

namespace fds {

// Fully connected network u_theta(x, t) with input (x, t), SiLU hidden
// activations, and a linear output layer.
//
// Parameters are one flat vector, laid out per layer as W (out x in,
// column-major) followed by b (out).
class MlpField final : public VelocityField {
 public:
  // widths = {d + 1, h1, ..., d}.
  explicit MlpField(std::vector<Index> widths);
  MlpField(std::vector<Index> widths, Vec params);

  static std::vector<Index> default_widths(Index d, Index hidden = 128, Index hidden_layers = 3);
  // U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  static MlpField initialized(std::vector<Index> widths, std::uint64_t seed);

  Index dim() const override { return widths_.back(); }
  Vec velocity(const Vec& x, double t) const override;
  Vec jvp(const Vec& x, double t, const Vec& direction) const override;

  const std::vector<Index>& widths() const noexcept { return widths_; }
  const Vec& params() const noexcept { return params_; }
  Vec& mutable_params() noexcept { return params_; }
  Index param_count() const noexcept { return params_.size(); }
  Index layer_count() const noexcept { return static_cast<Index>(widths_.size()) - 1; }

  // Batched forward: inputs [(d+1) x B] -> outputs [d x B].
  Mat forward(const Mat& inputs) const;

  // Mean over the batch of |u(x_t, t) - v_t|^2 and, if grad is non-null,
  // its parameter gradient (same layout as params()).
  double loss_and_gradient(const Mat& inputs, const Mat& targets, Vec* grad) const;

  void save(const std::filesystem::path& path) const;
  static MlpField load(const std::filesystem::path& path);
  std::string to_json() const;
  static MlpField from_json(const std::string& text);

 private:
  Index weight_offset(Index layer) const { return offsets_[static_cast<std::size_t>(layer)]; }

  std::vector<Index> widths_;
  std::vector<Index> offsets_;
  Vec params_;
};

inline double silu(double z) { return z / (1.0 + std::exp(-z)); }
inline double silu_grad(double z) {
  const double s = 1.0 / (1.0 + std::exp(-z));
  return s * (1.0 + z * (1.0 - s));
}

// Mean over the batch of |field(x_t, t) - v_t|^2 for any field.
double cfm_loss(const VelocityField& field, const std::vector<InterpolantSample>& batch);

}  // namespace fds
