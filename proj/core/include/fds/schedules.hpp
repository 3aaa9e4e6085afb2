#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fds {

// Interpolant coefficients at one time: x_t = alpha x1 + beta x0.
struct ScheduleValues {
  double alpha;
  double beta;
  double alpha_dot;
  double beta_dot;
};

// Coefficients of the affine form v = a x_t + b x1 of the sample-wise velocity.
struct FieldCoefficients {
  double a;
  double b;
};

enum class ScheduleKind { kLinear, kTable };

// Interpolant schedule (alpha_t, beta_t) on [0,1].
//
// The linear kind is exact. The table kind interpolates user-supplied knots
// with natural cubic splines (C2, so derivatives are smooth across knots) and
// is validated on construction: endpoints must be (0,1) -> (1,0), alpha
// strictly increasing, beta strictly decreasing.
class Schedule {
 public:
  static Schedule linear();
  static Schedule table(std::vector<double> knots, std::vector<double> alpha,
                        std::vector<double> beta);

  ScheduleKind kind() const noexcept { return kind_; }
  std::string name() const;

  // Throws DomainError outside [0,1].
  ScheduleValues eval(double t) const;
  // a = beta_dot / beta, b = alpha_dot - alpha beta_dot / beta.
  // Throws SingularityError where beta_t = 0.
  FieldCoefficients coeffs(double t) const;

 private:
  struct Spline {
    std::vector<double> y;
    std::vector<double> m;  // second derivatives at knots
  };

  Schedule() = default;
  static Spline fit(const std::vector<double>& x, const std::vector<double>& y);
  void eval_spline(const Spline& s, double t, double& value, double& deriv) const;

  ScheduleKind kind_ = ScheduleKind::kLinear;
  std::vector<double> knots_;
  Spline alpha_;
  Spline beta_;
};

// Parses "linear". Table schedules are built programmatically.
Schedule parse_schedule(std::string_view name);

enum class SigmaKind { kCosine, kLinear, kConcave, kConstant };

SigmaKind parse_sigma_kind(std::string_view name);
std::string to_string(SigmaKind kind);

// Perturbation scale for the refinement step. Decays from sigma_max at t = 0
// to 0 at the truncation time; shape(s) with s = t / t_trunc is
//   cosine   cos(pi s / 2)
//   linear   1 - s
//   concave  (1 - s)^2
//   constant 1
struct SigmaSchedule {
  SigmaKind kind = SigmaKind::kConstant;
  double sigma_max = 0.0;
};

// Zero for t >= t_trunc. Throws ConfigError for negative sigma_max and
// DomainError for t or t_trunc outside [0,1].
double sigma_at(const SigmaSchedule& sigma, double t, double t_trunc);

}  // namespace fds
