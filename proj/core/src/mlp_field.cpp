#include "fds/mlp_field.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fds/errors.hpp"
#include "fds/rng.hpp"
#include "fds/target.hpp"

namespace fds {
namespace {

constexpr const char* kFormat = "fdslab-mlp";
constexpr int kVersion = 1;

Index count_params(const std::vector<Index>& widths) {
  Index n = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) n += widths[l + 1] * widths[l] + widths[l + 1];
  return n;
}

template <typename Fn>
Mat apply(const Mat& z, Fn fn) {
  return z.unaryExpr(fn);
}

}  // namespace

MlpField::MlpField(std::vector<Index> widths) : MlpField(widths, Vec::Zero(count_params(widths))) {}

MlpField::MlpField(std::vector<Index> widths, Vec params)
    : widths_(std::move(widths)), params_(std::move(params)) {
  if (widths_.size() < 2) throw ConfigError("mlp needs at least one layer");
  for (Index w : widths_) if (w < 1) throw ConfigError("mlp layer widths must be >= 1");
  if (widths_.front() != widths_.back() + 1) {
    throw ShapeError("mlp input width must be state dimension + 1 (time coordinate)");
  }
  if (params_.size() != count_params(widths_)) throw ShapeError("mlp parameter count mismatch");
  Index off = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(off);
    off += widths_[l + 1] * widths_[l] + widths_[l + 1];
  }
}

std::vector<Index> MlpField::default_widths(Index d, Index hidden, Index hidden_layers) {
  std::vector<Index> w{d + 1};
  for (Index i = 0; i < hidden_layers; ++i) w.push_back(hidden);
  w.push_back(d);
  return w;
}

MlpField MlpField::initialized(std::vector<Index> widths, std::uint64_t seed) {
  MlpField net(std::move(widths));
  Rng rng(seed);
  Index off = 0;
  for (std::size_t l = 0; l + 1 < net.widths_.size(); ++l) {
    const Index in = net.widths_[l], out = net.widths_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Index i = 0; i < out * in + out; ++i) net.params_[off + i] = u(rng);
    off += out * in + out;
  }
  return net;
}

Mat MlpField::forward(const Mat& inputs) const {
  if (inputs.rows() != widths_.front()) throw ShapeError("mlp input has wrong width");
  Mat h = inputs;
  for (Index l = 0; l < layer_count(); ++l) {
    const Index in = widths_[l], out = widths_[l + 1];
    Eigen::Map<const Mat> w(params_.data() + weight_offset(l), out, in);
    Eigen::Map<const Vec> b(params_.data() + weight_offset(l) + out * in, out);
    Mat z = w * h;
    z.colwise() += b;
    h = (l + 1 < layer_count()) ? apply(z, [](double v) { return silu(v); }) : z;
  }
  return h;
}

Vec MlpField::velocity(const Vec& x, double t) const {
  if (x.size() != dim()) throw ShapeError("mlp query has wrong dimension");
  Vec in(x.size() + 1);
  in << x, t;
  return forward(in);
}

Vec MlpField::jvp(const Vec& x, double t, const Vec& direction) const {
  if (x.size() != dim() || direction.size() != dim()) throw ShapeError("mlp jvp has wrong dimension");
  // Forward-mode: carry (value, tangent) pairs through each layer; the time
  // coordinate has zero tangent.
  Vec h(x.size() + 1), dh(x.size() + 1);
  h << x, t;
  dh << direction, 0.0;
  for (Index l = 0; l < layer_count(); ++l) {
    const Index in = widths_[l], out = widths_[l + 1];
    Eigen::Map<const Mat> w(params_.data() + weight_offset(l), out, in);
    Eigen::Map<const Vec> b(params_.data() + weight_offset(l) + out * in, out);
    Vec z = w * h + b;
    Vec dz = w * dh;
    if (l + 1 < layer_count()) {
      for (Index i = 0; i < out; ++i) {
        dz[i] *= silu_grad(z[i]);
        z[i] = silu(z[i]);
      }
    }
    h = std::move(z);
    dh = std::move(dz);
  }
  return dh;
}

double MlpField::loss_and_gradient(const Mat& inputs, const Mat& targets, Vec* grad) const {
  if (inputs.cols() != targets.cols() || targets.rows() != dim() || inputs.rows() != widths_.front()) {
    throw ShapeError("cfm batch shape mismatch");
  }
  const Index batch = inputs.cols();
  if (batch < 1) throw ShapeError("cfm batch is empty");

  // Pre-activations per layer and the activations that feed each layer.
  std::vector<Mat> pre(static_cast<std::size_t>(layer_count()));
  std::vector<Mat> act(static_cast<std::size_t>(layer_count()) + 1);
  act[0] = inputs;
  for (Index l = 0; l < layer_count(); ++l) {
    const Index in = widths_[l], out = widths_[l + 1];
    Eigen::Map<const Mat> w(params_.data() + weight_offset(l), out, in);
    Eigen::Map<const Vec> b(params_.data() + weight_offset(l) + out * in, out);
    Mat z = w * act[l];
    z.colwise() += b;
    act[l + 1] = (l + 1 < layer_count()) ? apply(z, [](double v) { return silu(v); }) : z;
    pre[l] = std::move(z);
  }

  const Mat diff = act.back() - targets;
  const double loss = diff.squaredNorm() / static_cast<double>(batch);
  if (grad == nullptr) return loss;

  grad->setZero(params_.size());
  Mat delta = (2.0 / static_cast<double>(batch)) * diff;
  for (Index l = layer_count() - 1; l >= 0; --l) {
    const Index in = widths_[l], out = widths_[l + 1];
    Eigen::Map<const Mat> w(params_.data() + weight_offset(l), out, in);
    Eigen::Map<Mat> gw(grad->data() + weight_offset(l), out, in);
    Eigen::Map<Vec> gb(grad->data() + weight_offset(l) + out * in, out);
    gw.noalias() = delta * act[l].transpose();
    gb = delta.rowwise().sum();
    if (l > 0) {
      Mat back = w.transpose() * delta;
      delta = back.cwiseProduct(apply(pre[l - 1], [](double v) { return silu_grad(v); }));
    }
  }
  return loss;
}

std::string MlpField::to_json() const {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["activation"] = "silu";
  j["widths"] = widths_;
  j["params"] = std::vector<double>(params_.data(), params_.data() + params_.size());
  return j.dump();
}

MlpField MlpField::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != kFormat) throw ParseError("not an fdslab mlp checkpoint");
  if (j.value("version", 0) != kVersion) throw ParseError("unsupported checkpoint version");
  if (j.value("activation", "") != "silu") throw ParseError("unsupported activation");
  std::vector<Index> widths;
  std::vector<double> params;
  try {
    widths = j.at("widths").get<std::vector<Index>>();
    params = j.at("params").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
  Vec p = Eigen::Map<const Vec>(params.data(), static_cast<Index>(params.size()));
  return MlpField(widths, std::move(p));
}

void MlpField::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint " + path.string());
  out << to_json() << '\n';
}

MlpField MlpField::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

double cfm_loss(const VelocityField& field, const std::vector<InterpolantSample>& batch) {
  if (batch.empty()) throw ShapeError("cfm batch is empty");
  double sum = 0.0;
  for (const auto& s : batch) {
    if (s.xt.size() != field.dim() || s.vt.size() != field.dim()) throw ShapeError("cfm sample dimension mismatch");
    sum += (field.velocity(s.xt, s.t) - s.vt).squaredNorm();
  }
  return sum / static_cast<double>(batch.size());
}

}  // namespace fds
