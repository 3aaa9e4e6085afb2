#include "fds/sampler.hpp"

#include <charconv>
#include <cmath>

#include "fds/errors.hpp"

namespace fds {
namespace {

Vec checked(Vec v, const char* what, double t) {
  if (!v.allFinite()) {
    throw IntegrationError(std::string(what) + " produced a non-finite state at t=" + std::to_string(t));
  }
  return v;
}

void check_interval(double t0, double t1) {
  if (!(t0 < t1)) throw DomainError("solver step needs t0 < t1");
}

double score(const VelocityField& field, const Vec& x, double t, const DivergenceConfig& div,
             const Mat& probes, Index candidate) {
  const double value = div.method == DivergenceMethod::kExactBasis
                           ? field.divergence(x, t)
                           : hutchinson_with_probes(field, x, t, probes).value;
  if (!std::isfinite(value)) {
    throw RefinementError("non-finite divergence for candidate " + std::to_string(candidate) +
                          " at t=" + std::to_string(t));
  }
  return value;
}

}  // namespace

Solver parse_solver(std::string_view name) {
  if (name == "euler") return Solver::kEuler;
  if (name == "heun") return Solver::kHeun;
  throw ConfigError("unknown solver '" + std::string(name) + "' (expected euler|heun)");
}

std::string to_string(Solver s) { return s == Solver::kEuler ? "euler" : "heun"; }

std::vector<double> uniform_grid(std::size_t steps) {
  if (steps < 1) throw ConfigError("time grid needs at least one step");
  std::vector<double> g(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) g[k] = static_cast<double>(k) / static_cast<double>(steps);
  g.back() = 1.0;
  return g;
}

Vec euler_step(const VelocityField& field, const Vec& x, double t0, double t1) {
  check_interval(t0, t1);
  const Vec u = checked(field.velocity(x, t0), "field", t0);
  return checked(x + (t1 - t0) * u, "euler step", t1);
}

Vec heun_step(const VelocityField& field, const Vec& x, double t0, double t1, bool* fell_back) {
  check_interval(t0, t1);
  if (fell_back) *fell_back = false;
  if (!field.evaluable_at(t1)) {
    if (fell_back) *fell_back = true;
    return euler_step(field, x, t0, t1);
  }
  const double dt = t1 - t0;
  const Vec u0 = checked(field.velocity(x, t0), "field", t0);
  const Vec predictor = x + dt * u0;
  const Vec u1 = checked(field.velocity(predictor, t1), "field", t1);
  return checked(x + 0.5 * dt * (u0 + u1), "heun step", t1);
}

DivergenceConfig parse_divergence(std::string_view text) {
  if (text == "exact") return {};
  auto parse_count = [&](std::string_view digits) {
    Index p = 0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size() || p < 1) {
      throw ConfigError("bad probe count in '" + std::string(text) + "'");
    }
    return p;
  };
  if (text.starts_with("hutch:")) {
    return {DivergenceMethod::kHutchinson, parse_count(text.substr(6)), ProbeKind::kGaussian};
  }
  if (text.starts_with("hutch-rademacher:")) {
    return {DivergenceMethod::kHutchinson, parse_count(text.substr(17)), ProbeKind::kRademacher};
  }
  throw ConfigError("unknown divergence method '" + std::string(text) +
                    "' (expected exact|hutch:<probes>|hutch-rademacher:<probes>)");
}

std::string to_string(const DivergenceConfig& d) {
  if (d.method == DivergenceMethod::kExactBasis) return "exact";
  return std::string(d.probe == ProbeKind::kRademacher ? "hutch-rademacher:" : "hutch:") +
         std::to_string(d.probes);
}

bool FdsConfig::active_at(double t) const {
  return enabled() && t < t_trunc && sigma_at(sigma, t, t_trunc) > 0.0;
}

Index FdsConfig::evals_per_refine(Index d) const {
  const Index per_candidate = divergence.method == DivergenceMethod::kExactBasis ? d : divergence.probes;
  return n * (m + 1) * per_candidate;
}

void FdsConfig::validate() const {
  if (m < 0 || n < 0) throw ConfigError("fds.m and fds.n must be >= 0");
  if (!(sigma.sigma_max >= 0.0)) throw ConfigError("fds.sigma-max must be >= 0");
  if (!(t_trunc >= 0.0 && t_trunc <= 1.0)) throw ConfigError("fds.t-trunc must lie in [0,1]");
  if (divergence.method == DivergenceMethod::kHutchinson && divergence.probes < 1) {
    throw ConfigError("hutchinson divergence needs >= 1 probe");
  }
}

FdsConfig FdsConfig::toy() {
  FdsConfig c;
  c.m = 1;
  c.n = 1;
  c.sigma = {SigmaKind::kConstant, 0.3};
  c.t_trunc = 1.0;
  return c;
}

FdsConfig FdsConfig::main_style(double sigma_max) {
  FdsConfig c;
  c.m = 1;
  c.n = 1;
  c.sigma = {SigmaKind::kCosine, sigma_max};
  c.t_trunc = 0.5;
  return c;
}

RefineResult refine(const VelocityField& field, const Vec& x, double t, const FdsConfig& cfg, Rng& rng) {
  cfg.validate();
  RefineResult out{x, {}, 0};
  if (!cfg.enabled()) return out;
  const double sigma = sigma_at(cfg.sigma, t, cfg.t_trunc);
  if (sigma == 0.0) return out;

  const Index d = field.dim();
  const Index per_candidate =
      cfg.divergence.method == DivergenceMethod::kExactBasis ? d : cfg.divergence.probes;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec> candidates(static_cast<std::size_t>(cfg.m + 1));

  for (Index iter = 0; iter < cfg.n; ++iter) {
    candidates[0] = out.x;
    for (Index c = 1; c <= cfg.m; ++c) {
      Vec xi(d);
      for (Index i = 0; i < d; ++i) xi[i] = normal(rng);
      candidates[static_cast<std::size_t>(c)] = out.x + sigma * xi;
    }
    Mat probes;
    if (cfg.divergence.method == DivergenceMethod::kHutchinson) {
      probes = draw_probes(d, cfg.divergence.probes, cfg.divergence.probe, rng);
    }

    const double incumbent = score(field, candidates[0], t, cfg.divergence, probes, 0);
    double best = incumbent;
    Index best_index = 0;
    for (Index c = 1; c <= cfg.m; ++c) {
      const double value = score(field, candidates[static_cast<std::size_t>(c)], t, cfg.divergence, probes, c);
      if (value < best) {
        best = value;
        best_index = c;
      }
    }
    out.field_evals += (cfg.m + 1) * per_candidate;
    out.x = candidates[static_cast<std::size_t>(best_index)];
    out.iterations.push_back({incumbent, best, best_index});
  }
  return out;
}

const Mat& RunRecord::state_at(double t) const {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] == t) {
      if (k >= states.size()) break;
      return states[k];
    }
  }
  throw ConfigError("no recorded state at t=" + std::to_string(t));
}

RunRecord run_pipeline(const VelocityField& field, Solver solver, const std::vector<double>& grid,
                       const FdsConfig& cfg, Index n, std::uint64_t seed, const PipelineOptions& options) {
  cfg.validate();
  if (n < 1) throw ConfigError("pipeline needs n >= 1 samples");
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0) {
    throw ConfigError("time grid must start at 0 and end at 1");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw ConfigError("time grid must be strictly increasing");
  }

  const Index d = field.dim();
  const std::size_t steps = grid.size() - 1;
  RunRecord rec;
  rec.grid = grid;
  rec.solver = solver;
  rec.fds = cfg;
  rec.seed = seed;
  rec.n = n;
  rec.d = d;
  rec.refined_step.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) rec.refined_step[k] = cfg.active_at(grid[k]) ? 1 : 0;
  if (options.record_states) {
    rec.states.assign(steps + 1, Mat(n, d));
    rec.refined.assign(steps, Mat(n, d));
  }
  if (options.diagnostics) {
    rec.div_pre = Mat(static_cast<Index>(steps), n);
    rec.div_post = Mat(static_cast<Index>(steps), n);
  }
  rec.final_samples = Mat(n, d);

  for (Index i = 0; i < n; ++i) {
    Rng prior = make_rng(seed, Stream::kPrior, static_cast<std::uint64_t>(i));
    Rng noise = make_rng(seed, Stream::kRefine, static_cast<std::uint64_t>(i));
    Vec x = standard_normal(d, prior);

    for (std::size_t k = 0; k < steps; ++k) {
      const double t0 = grid[k], t1 = grid[k + 1];
      const auto row = static_cast<Index>(k);
      if (options.record_states) rec.states[k].row(i) = x.transpose();
      if (options.diagnostics) rec.div_pre(row, i) = field.divergence(x, t0);

      if (rec.refined_step[k]) {
        auto r = refine(field, x, t0, cfg, noise);
        rec.refine_evals += r.field_evals;
        for (std::size_t it = 0; it < r.iterations.size(); ++it) {
          const auto& e = r.iterations[it];
          rec.log.push_back({row, i, static_cast<Index>(it), e.incumbent_divergence,
                             e.chosen_divergence, e.chosen_index});
        }
        x = std::move(r.x);
        if (options.diagnostics) rec.div_post(row, i) = field.divergence(x, t0);
      } else if (options.diagnostics) {
        rec.div_post(row, i) = rec.div_pre(row, i);
      }
      if (options.record_states) rec.refined[k].row(i) = x.transpose();

      if (solver == Solver::kEuler) {
        x = euler_step(field, x, t0, t1);
        rec.solver_evals += 1;
      } else {
        bool fell_back = false;
        x = heun_step(field, x, t0, t1, &fell_back);
        rec.solver_evals += fell_back ? 1 : 2;
        rec.heun_fallback = rec.heun_fallback || fell_back;
      }
    }
    if (options.record_states) rec.states[steps].row(i) = x.transpose();
    rec.final_samples.row(i) = x.transpose();
  }
  return rec;
}

}  // namespace fds
