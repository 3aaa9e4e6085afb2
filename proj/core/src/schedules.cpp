#include "fds/schedules.hpp"

#include <cmath>
#include <numbers>

#include "fds/errors.hpp"

namespace fds {
namespace {

void check_time(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(t));
  }
}

}  // namespace

Schedule Schedule::linear() { return Schedule{}; }

Schedule Schedule::table(std::vector<double> knots, std::vector<double> alpha,
                         std::vector<double> beta) {
  if (knots.size() < 2 || knots.size() != alpha.size() || knots.size() != beta.size()) {
    throw ConfigError("schedule table needs >= 2 knots with matching alpha/beta columns");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) throw ConfigError("schedule knots must be strictly increasing");
  }
  if (knots.front() != 0.0 || knots.back() != 1.0) {
    throw ConfigError("schedule knots must span exactly [0,1]");
  }
  if (alpha.front() != 0.0 || beta.front() != 1.0 || alpha.back() != 1.0 || beta.back() != 0.0) {
    throw ConfigError("schedule must satisfy (alpha,beta) = (0,1) at t=0 and (1,0) at t=1");
  }

  Schedule s;
  s.kind_ = ScheduleKind::kTable;
  s.alpha_ = fit(knots, alpha);
  s.beta_ = fit(knots, beta);
  s.knots_ = std::move(knots);

  // Monotonicity of the interpolant, not just of the knot values.
  constexpr int kProbe = 4096;
  for (int i = 0; i <= kProbe; ++i) {
    const double t = static_cast<double>(i) / kProbe;
    const auto v = s.eval(t);
    if (!(v.alpha_dot > 0.0) || !(v.beta_dot < 0.0)) {
      throw ConfigError("schedule table interpolant is not strictly monotone near t=" +
                        std::to_string(t));
    }
  }
  return s;
}

Schedule::Spline Schedule::fit(const std::vector<double>& x, const std::vector<double>& y) {
  // Natural cubic spline: tridiagonal system for the second derivatives.
  const std::size_t n = x.size();
  Spline s{y, std::vector<double>(n, 0.0)};
  if (n < 3) return s;
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    const double diag = 2.0 * (h0 + h1);
    const double rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    const double denom = diag - h0 * c[i - 1];
    c[i] = h1 / denom;
    d[i] = (rhs - h0 * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    s.m[i] = d[i] - c[i] * s.m[i + 1];
  }
  return s;
}

void Schedule::eval_spline(const Spline& s, double t, double& value, double& deriv) const {
  std::size_t i = 0;
  while (i + 2 < knots_.size() && t > knots_[i + 1]) ++i;
  const double h = knots_[i + 1] - knots_[i];
  const double A = (knots_[i + 1] - t) / h;
  const double B = (t - knots_[i]) / h;
  value = A * s.y[i] + B * s.y[i + 1] +
          ((A * A * A - A) * s.m[i] + (B * B * B - B) * s.m[i + 1]) * h * h / 6.0;
  deriv = (s.y[i + 1] - s.y[i]) / h +
          (-(3.0 * A * A - 1.0) * s.m[i] + (3.0 * B * B - 1.0) * s.m[i + 1]) * h / 6.0;
}

std::string Schedule::name() const { return kind_ == ScheduleKind::kLinear ? "linear" : "table"; }

ScheduleValues Schedule::eval(double t) const {
  check_time(t, "t");
  if (kind_ == ScheduleKind::kLinear) return {t, 1.0 - t, 1.0, -1.0};
  ScheduleValues v{};
  eval_spline(alpha_, t, v.alpha, v.alpha_dot);
  eval_spline(beta_, t, v.beta, v.beta_dot);
  // Pin the boundary values exactly.
  if (t == 0.0) { v.alpha = 0.0; v.beta = 1.0; }
  if (t == 1.0) { v.alpha = 1.0; v.beta = 0.0; }
  return v;
}

FieldCoefficients Schedule::coeffs(double t) const {
  const auto v = eval(t);
  if (v.beta == 0.0) {
    throw SingularityError("field coefficients are singular where beta_t = 0 (t=" +
                           std::to_string(t) + ")");
  }
  const double a = v.beta_dot / v.beta;
  return {a, v.alpha_dot - v.alpha * a};
}

Schedule parse_schedule(std::string_view name) {
  if (name == "linear") return Schedule::linear();
  throw ConfigError("unknown schedule '" + std::string(name) + "' (expected: linear)");
}

SigmaKind parse_sigma_kind(std::string_view name) {
  if (name == "cosine") return SigmaKind::kCosine;
  if (name == "linear") return SigmaKind::kLinear;
  if (name == "concave") return SigmaKind::kConcave;
  if (name == "constant") return SigmaKind::kConstant;
  throw ConfigError("unknown sigma kind '" + std::string(name) +
                    "' (expected cosine|linear|concave|constant)");
}

std::string to_string(SigmaKind kind) {
  switch (kind) {
    case SigmaKind::kCosine: return "cosine";
    case SigmaKind::kLinear: return "linear";
    case SigmaKind::kConcave: return "concave";
    case SigmaKind::kConstant: return "constant";
  }
  return "unknown";
}

double sigma_at(const SigmaSchedule& sigma, double t, double t_trunc) {
  if (!(sigma.sigma_max >= 0.0)) {
    throw ConfigError("sigma.max must be non-negative, got " + std::to_string(sigma.sigma_max));
  }
  check_time(t, "t");
  check_time(t_trunc, "t_trunc");
  if (t >= t_trunc) return 0.0;
  const double s = t / t_trunc;
  switch (sigma.kind) {
    case SigmaKind::kCosine: return sigma.sigma_max * std::cos(0.5 * std::numbers::pi * s);
    case SigmaKind::kLinear: return sigma.sigma_max * (1.0 - s);
    case SigmaKind::kConcave: return sigma.sigma_max * (1.0 - s) * (1.0 - s);
    case SigmaKind::kConstant: return sigma.sigma_max;
  }
  return 0.0;
}

}  // namespace fds
