#include "fds/oracle_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fds/errors.hpp"

namespace fds {

OracleField::OracleField(EmpiricalTarget target, Schedule schedule, OracleOptions options)
    : target_(std::move(target)), schedule_(std::move(schedule)), options_(options) {
  if (!(options_.log_weight_floor > 0.0)) throw ConfigError("log_weight_floor must be positive");
  if (options_.top_k < 1) throw ConfigError("top_k must be >= 1");
}

bool OracleField::evaluable_at(double t) const {
  return t >= 0.0 && t <= 1.0 && schedule_.eval(t).beta != 0.0;
}

Posterior OracleField::posterior(const Vec& x, double t) const {
  if (x.size() != dim()) throw ShapeError("query point dimension does not match target");
  Posterior post;
  post.sched = schedule_.eval(t);
  if (post.sched.beta == 0.0) {
    throw SingularityError("oracle field is singular where beta_t = 0 (t=" + std::to_string(t) + ")");
  }
  post.coeffs = schedule_.coeffs(t);

  const Mat& pts = target_.columns();
  const Index K = target_.size();
  const double alpha = post.sched.alpha;
  const double inv_two_var = 1.0 / (2.0 * post.sched.beta * post.sched.beta);

  std::vector<double> logit(static_cast<std::size_t>(K));
  double best = -std::numeric_limits<double>::infinity();
  for (Index k = 0; k < K; ++k) {
    const double l = -(x - alpha * pts.col(k)).squaredNorm() * inv_two_var;
    logit[static_cast<std::size_t>(k)] = l;
    best = std::max(best, l);
  }

  std::vector<Index> keep;
  if (options_.truncate && K > options_.truncate_above && K > options_.top_k) {
    keep.resize(static_cast<std::size_t>(K));
    std::iota(keep.begin(), keep.end(), Index{0});
    std::nth_element(keep.begin(), keep.begin() + options_.top_k - 1, keep.end(),
                     [&](Index a, Index b) { return logit[a] > logit[b]; });
    keep.resize(static_cast<std::size_t>(options_.top_k));
    std::sort(keep.begin(), keep.end());
  }

  const double cutoff = best - options_.log_weight_floor;
  auto consider = [&](Index k) {
    if (logit[static_cast<std::size_t>(k)] >= cutoff) {
      post.index.push_back(k);
      post.weight.push_back(std::exp(logit[static_cast<std::size_t>(k)] - best));
    }
  };
  if (keep.empty()) {
    for (Index k = 0; k < K; ++k) consider(k);
  } else {
    for (Index k : keep) consider(k);
  }

  const double total = std::accumulate(post.weight.begin(), post.weight.end(), 0.0);
  post.mean = Vec::Zero(dim());
  for (std::size_t j = 0; j < post.weight.size(); ++j) {
    post.weight[j] /= total;
    post.mean.noalias() += post.weight[j] * pts.col(post.index[j]);
  }
  return post;
}

Vec OracleField::posterior_weights(const Vec& x, double t) const {
  const auto post = posterior(x, t);
  Vec w = Vec::Zero(target_.size());
  for (std::size_t j = 0; j < post.index.size(); ++j) w[post.index[j]] = post.weight[j];
  return w;
}

Vec OracleField::velocity(const Vec& x, double t) const {
  const auto post = posterior(x, t);
  return post.coeffs.a * x + post.coeffs.b * post.mean;
}

DivergenceParts OracleField::parts_from(const Posterior& post) const {
  // tr d E[x1|x]/dx = (alpha / beta^2) sum_k w_k x1^(k) . (x1^(k) - m), which
  // equals the weighted spread around m because sum_k w_k (x1^(k) - m) = 0.
  const Mat& pts = target_.columns();
  double spread = 0.0;
  for (std::size_t j = 0; j < post.index.size(); ++j) {
    spread += post.weight[j] * (pts.col(post.index[j]) - post.mean).squaredNorm();
  }
  const auto& s = post.sched;
  return {post.coeffs.a * static_cast<double>(dim()),
          post.coeffs.b * s.alpha / (s.beta * s.beta) * spread};
}

DivergenceParts OracleField::divergence_parts(const Vec& x, double t) const {
  return parts_from(posterior(x, t));
}

double OracleField::divergence(const Vec& x, double t) const { return divergence_parts(x, t).total(); }

Vec OracleField::jvp(const Vec& x, double t, const Vec& direction) const {
  const auto post = posterior(x, t);
  const Mat& pts = target_.columns();
  Vec cov_dir = Vec::Zero(dim());
  for (std::size_t j = 0; j < post.index.size(); ++j) {
    const Vec centered = pts.col(post.index[j]) - post.mean;
    cov_dir.noalias() += post.weight[j] * centered.dot(direction) * centered;
  }
  const auto& s = post.sched;
  return post.coeffs.a * direction + (post.coeffs.b * s.alpha / (s.beta * s.beta)) * cov_dir;
}

Vec OracleField::conditional_score(const Vec& x, const Vec& x1, double t) const {
  const auto s = schedule_.eval(t);
  if (s.beta == 0.0) throw SingularityError("conditional score is singular where beta_t = 0");
  return -(x - s.alpha * x1) / (s.beta * s.beta);
}

Vec OracleField::marginal_score(const Vec& x, double t) const {
  const auto post = posterior(x, t);
  return -(x - post.sched.alpha * post.mean) / (post.sched.beta * post.sched.beta);
}

Vec OracleField::posterior_score(const Vec& x, const Vec& x1, double t) const {
  return conditional_score(x, x1, t) - marginal_score(x, t);
}

Vec OracleField::posterior_score_centered(const Vec& x, const Vec& x1, double t) const {
  const auto post = posterior(x, t);
  return (post.sched.alpha / (post.sched.beta * post.sched.beta)) * (x1 - post.mean);
}

double OracleField::log_marginal_density(const Vec& x, double t) const {
  const auto s = schedule_.eval(t);
  if (s.beta == 0.0) throw SingularityError("marginal density is singular where beta_t = 0");
  const Mat& pts = target_.columns();
  const double var = s.beta * s.beta;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> logit(static_cast<std::size_t>(target_.size()));
  for (Index k = 0; k < target_.size(); ++k) {
    logit[static_cast<std::size_t>(k)] = -(x - s.alpha * pts.col(k)).squaredNorm() / (2.0 * var);
    best = std::max(best, logit[static_cast<std::size_t>(k)]);
  }
  double sum = 0.0;
  for (double l : logit) sum += std::exp(l - best);
  const double d = static_cast<double>(dim());
  return best + std::log(sum / static_cast<double>(target_.size())) -
         0.5 * d * std::log(2.0 * std::numbers::pi * var);
}

DiscrepancyReport OracleField::discrepancy_exact(const Vec& x, double t) const {
  const auto s = schedule_.eval(t);
  if (s.alpha == 0.0) {
    throw TheoremDomainError("discrepancy identity requires alpha_t != 0 (t=" + std::to_string(t) + ")");
  }
  const auto post = posterior(x, t);
  const auto& c = post.coeffs;
  const Mat& pts = target_.columns();

  const Vec u = c.a * x + c.b * post.mean;
  double lhs = 0.0;
  for (std::size_t j = 0; j < post.index.size(); ++j) {
    const Vec v = c.a * x + c.b * pts.col(post.index[j]);
    lhs += post.weight[j] * (u - v).squaredNorm();
  }

  const auto parts = parts_from(post);
  // In beta div - beta_dot d the schedule term beta a_t d - beta_dot d is
  // identically zero (a_t = beta_dot / beta), leaving beta times the
  // posterior part.
  const double coef = (s.alpha_dot * s.beta - s.alpha * s.beta_dot) / s.alpha;
  const double rhs = coef * s.beta * parts.posterior;

  return {x, t, lhs, rhs, parts.total(), relative_error(lhs, rhs)};
}

double theorem_rhs(const ScheduleValues& s, double divergence, Index d) {
  if (s.alpha == 0.0) throw TheoremDomainError("discrepancy identity requires alpha_t != 0");
  const double coef = (s.alpha_dot * s.beta - s.alpha * s.beta_dot) / s.alpha;
  return coef * (s.beta * divergence - s.beta_dot * static_cast<double>(d));
}

double relative_error(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max(lhs, kRelErrorFloor);
}

}  // namespace fds
