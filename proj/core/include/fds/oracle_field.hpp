#pragma once

#include <vector>

#include "fds/linalg.hpp"
#include "fds/schedules.hpp"
#include "fds/target.hpp"
#include "fds/velocity_field.hpp"

namespace fds {

// Posterior p(x1^(k) | x_t) over the empirical target, restricted to the
// components that survive the weight floor.
struct Posterior {
  std::vector<Index> index;   // surviving components
  std::vector<double> weight; // normalized, same order as index
  Vec mean;                   // E[x1 | x_t]
  ScheduleValues sched;
  FieldCoefficients coeffs;
};

// Divergence of the marginal field split into the schedule term a_t d and
// the posterior-covariance term (b_t alpha_t / beta_t^2) tr Cov[x1 | x_t].
struct DivergenceParts {
  double affine;
  double posterior;
  double total() const { return affine + posterior; }
};

struct DiscrepancyReport {
  Vec x;
  double t;
  double lhs;                       // sum_k w_k |u - v^(k)|^2
  double rhs_theorem;               // divergence form of the same quantity
  double rhs_surrogate_divergence;  // div u
  double rel_error;
};

struct OracleOptions {
  // Components with log-weight below (max - log_weight_floor) are dropped.
  double log_weight_floor = 40.0;
  // Approximate mode for large K: keep only the top_k largest-weight
  // components per query. Applies only when K > truncate_above.
  bool truncate = false;
  Index top_k = 512;
  Index truncate_above = 10000;
};

// The exact marginal velocity induced by a finite target set:
//   u_t(x) = a_t x + b_t E[x1 | x_t = x],
// with posterior weights w_k proportional to N(x; alpha_t x1^(k), beta_t^2 I).
class OracleField final : public VelocityField {
 public:
  OracleField(EmpiricalTarget target, Schedule schedule, OracleOptions options = {});

  const EmpiricalTarget& target() const noexcept { return target_; }
  const Schedule& schedule() const noexcept { return schedule_; }
  const OracleOptions& options() const noexcept { return options_; }

  Index dim() const override { return target_.dim(); }
  Vec velocity(const Vec& x, double t) const override;
  Vec jvp(const Vec& x, double t, const Vec& direction) const override;
  double divergence(const Vec& x, double t) const override;
  bool evaluable_at(double t) const override;

  // Throws SingularityError where beta_t = 0.
  Posterior posterior(const Vec& x, double t) const;
  // Dense weight vector of length K (dropped components are exactly 0).
  Vec posterior_weights(const Vec& x, double t) const;
  Vec marginal_velocity(const Vec& x, double t) const { return velocity(x, t); }
  DivergenceParts divergence_parts(const Vec& x, double t) const;
  double marginal_divergence_analytic(const Vec& x, double t) const { return divergence(x, t); }

  Vec conditional_score(const Vec& x, const Vec& x1, double t) const;
  Vec marginal_score(const Vec& x, double t) const;
  // grad_x log p(x1 | x_t) via Bayes: conditional - marginal.
  Vec posterior_score(const Vec& x, const Vec& x1, double t) const;
  // The centered form (alpha_t / beta_t^2)(x1 - E[x1 | x_t]).
  Vec posterior_score_centered(const Vec& x, const Vec& x1, double t) const;

  // log p_t(x) for the K-component mixture (for finite-difference checks).
  double log_marginal_density(const Vec& x, double t) const;

  // Throws TheoremDomainError where alpha_t = 0.
  DiscrepancyReport discrepancy_exact(const Vec& x, double t) const;

 private:
  DivergenceParts parts_from(const Posterior& post) const;

  EmpiricalTarget target_;
  Schedule schedule_;
  OracleOptions options_;
};

// ((alpha_dot beta - alpha beta_dot) / alpha) (beta div - beta_dot d).
double theorem_rhs(const ScheduleValues& s, double divergence, Index d);

constexpr double kRelErrorFloor = 1e-12;
double relative_error(double lhs, double rhs);

}  // namespace fds
