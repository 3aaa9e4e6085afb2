#include "fds/velocity_field.hpp"

#include <cmath>

#include "fds/errors.hpp"

namespace fds {

std::string to_string(DivergenceMethod m) {
  return m == DivergenceMethod::kExactBasis ? "exact" : "hutchinson";
}

double VelocityField::divergence(const Vec& x, double t) const {
  double trace = 0.0;
  Vec e = Vec::Zero(dim());
  for (Index i = 0; i < dim(); ++i) {
    e[i] = 1.0;
    trace += e.dot(jvp(x, t, e));
    e[i] = 0.0;
  }
  return trace;
}

DivergenceEstimate divergence_exact_basis(const VelocityField& field, const Vec& x, double t) {
  return {field.divergence(x, t), DivergenceMethod::kExactBasis, field.dim(), 0.0};
}

Mat draw_probes(Index d, Index probes, ProbeKind kind, Rng& rng) {
  if (kind == ProbeKind::kBasis) return Mat::Identity(d, d);
  Mat out(d, probes);
  if (kind == ProbeKind::kGaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index j = 0; j < probes; ++j)
      for (Index i = 0; i < d; ++i) out(i, j) = normal(rng);
  } else {
    std::bernoulli_distribution coin(0.5);
    for (Index j = 0; j < probes; ++j)
      for (Index i = 0; i < d; ++i) out(i, j) = coin(rng) ? 1.0 : -1.0;
  }
  return out;
}

DivergenceEstimate hutchinson_with_probes(const VelocityField& field, const Vec& x, double t,
                                          const Mat& probes) {
  const Index p = probes.cols();
  if (p < 1) throw ConfigError("hutchinson estimator needs at least one probe");
  double sum = 0.0, sum_sq = 0.0;
  for (Index j = 0; j < p; ++j) {
    const Vec xi = probes.col(j);
    const double q = xi.dot(field.jvp(x, t, xi));
    sum += q;
    sum_sq += q * q;
  }
  const double mean = sum / static_cast<double>(p);
  double se = 0.0;
  if (p > 1) {
    const double var = std::max(0.0, (sum_sq - p * mean * mean) / static_cast<double>(p - 1));
    se = std::sqrt(var / static_cast<double>(p));
  }
  return {mean, DivergenceMethod::kHutchinson, p, se};
}

DivergenceEstimate divergence_hutchinson(const VelocityField& field, const Vec& x, double t,
                                         Index probes, std::uint64_t seed, ProbeKind kind) {
  if (probes < 1) throw ConfigError("hutchinson estimator needs at least one probe");
  if (kind == ProbeKind::kBasis) {
    // E over a uniformly chosen sqrt(d) e_i is the trace; summing the d
    // diagonal entries is that expectation taken exactly.
    double trace = 0.0;
    Vec e = Vec::Zero(field.dim());
    for (Index i = 0; i < field.dim(); ++i) {
      e[i] = 1.0;
      trace += e.dot(field.jvp(x, t, e));
      e[i] = 0.0;
    }
    return {trace, DivergenceMethod::kHutchinson, field.dim(), 0.0};
  }
  Rng rng(seed);
  return hutchinson_with_probes(field, x, t, draw_probes(field.dim(), probes, kind, rng));
}

AffineField::AffineField(Mat a, Vec c) : a_(std::move(a)), c_(std::move(c)) {
  if (a_.rows() != a_.cols() || a_.rows() != c_.size()) throw ShapeError("affine field shape mismatch");
}

Vec AffineField::velocity(const Vec& x, double) const { return a_ * x + c_; }
Vec AffineField::jvp(const Vec&, double, const Vec& direction) const { return a_ * direction; }
double AffineField::divergence(const Vec&, double) const { return a_.trace(); }

FunctionField::FunctionField(Index d, Fn u, JacFn jacobian)
    : d_(d), u_(std::move(u)), jac_(std::move(jacobian)) {}

Vec FunctionField::jvp(const Vec& x, double t, const Vec& direction) const {
  if (jac_) return jac_(x, t) * direction;
  constexpr double h = 1e-6;
  return (u_(x + h * direction, t) - u_(x - h * direction, t)) / (2.0 * h);
}

}  // namespace fds
