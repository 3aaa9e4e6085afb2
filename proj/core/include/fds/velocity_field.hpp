#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "fds/linalg.hpp"
#include "fds/rng.hpp"

namespace fds {

// u(x, t) over R^d x [0,1] with forward-mode directional derivatives.
// Implementations are immutable after construction and safe to share
// across threads.
class VelocityField {
 public:
  virtual ~VelocityField() = default;

  virtual Index dim() const = 0;
  virtual Vec velocity(const Vec& x, double t) const = 0;
  // J_x u(x,t) * direction.
  virtual Vec jvp(const Vec& x, double t, const Vec& direction) const = 0;
  // Spatial divergence, trace of J_x u. The default sums d basis JVPs.
  virtual double divergence(const Vec& x, double t) const;
  // False where the field is not defined (the oracle field at beta_t = 0).
  virtual bool evaluable_at(double /*t*/) const { return true; }
};

enum class DivergenceMethod { kExactBasis, kHutchinson };
enum class ProbeKind { kGaussian, kRademacher, kBasis };

std::string to_string(DivergenceMethod m);

struct DivergenceEstimate {
  double value = 0.0;
  DivergenceMethod method = DivergenceMethod::kExactBasis;
  Index probes = 0;
  double stderr_ = 0.0;
};

// Sum_i e_i^T (J u) e_i over the d basis directions.
DivergenceEstimate divergence_exact_basis(const VelocityField& field, const Vec& x, double t);

// Mean over probes of xi^T (J u) xi. With ProbeKind::kBasis the probe count
// is forced to d and the result equals divergence_exact_basis.
DivergenceEstimate divergence_hutchinson(const VelocityField& field, const Vec& x, double t,
                                         Index probes, std::uint64_t seed,
                                         ProbeKind kind = ProbeKind::kGaussian);

// Probe vectors stored one per column [d x probes].
Mat draw_probes(Index d, Index probes, ProbeKind kind, Rng& rng);

// Hutchinson estimate against a fixed probe set (common random numbers).
DivergenceEstimate hutchinson_with_probes(const VelocityField& field, const Vec& x, double t,
                                          const Mat& probes);

// u(x,t) = A x + c.
class AffineField final : public VelocityField {
 public:
  AffineField(Mat a, Vec c);
  Index dim() const override { return c_.size(); }
  Vec velocity(const Vec& x, double t) const override;
  Vec jvp(const Vec& x, double t, const Vec& direction) const override;
  double divergence(const Vec& x, double t) const override;

 private:
  Mat a_;
  Vec c_;
};

// Closure-backed field for analytic test problems. The JVP falls back to
// central differences when no Jacobian is supplied.
class FunctionField final : public VelocityField {
 public:
  using Fn = std::function<Vec(const Vec&, double)>;
  using JacFn = std::function<Mat(const Vec&, double)>;

  FunctionField(Index d, Fn u, JacFn jacobian = {});
  Index dim() const override { return d_; }
  Vec velocity(const Vec& x, double t) const override { return u_(x, t); }
  Vec jvp(const Vec& x, double t, const Vec& direction) const override;

 private:
  Index d_;
  Fn u_;
  JacFn jac_;
};

}  // namespace fds
