#include "app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <ostream>

#include "app/field_source.hpp"
#include "fds/csv.hpp"
#include "fds/errors.hpp"
#include "fds/metrics.hpp"
#include "fds/rng.hpp"
#include "fds/run_io.hpp"

namespace fds::app {
namespace {

using ordered_json = nlohmann::ordered_json;

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

void write_training(const std::filesystem::path& out, const TrainResult& result) {
  result.field.save(out / "model.json");
  CsvWriter curve(out / "train_curve.csv");
  curve.header({"step", "loss"});
  for (const auto& p : result.curve) {
    curve.cell(static_cast<long long>(p.step)).cell(p.loss);
    curve.end_row();
  }
  curve.close();
}

void write_snapshot(const CommandContext& ctx) { write_text_file(ctx.out / "config.txt", ctx.settings.snapshot()); }

Index reference_size(const Settings& s) {
  const long long n_ref = s.integer("wd.n-ref");
  if (n_ref < 0) throw ConfigError("wd.n-ref must be >= 0");
  return n_ref == 0 ? s.integer("n") : n_ref;
}

Index sample_count(const Settings& s) {
  const long long n = s.integer("n");
  if (n < 1) throw ConfigError("n must be >= 1");
  return n;
}

void require_grid_times(const std::vector<double>& grid, const std::vector<double>& times, const char* key) {
  for (double t : times) {
    if (std::find(grid.begin(), grid.end(), t) == grid.end()) {
      throw ConfigError(std::string(key) + ": t=" + format_double(t) + " is not a point of the solver grid");
    }
  }
}

Index axis_integer(const std::string& axis, const std::string& value) {
  std::size_t used = 0;
  long long v = -1;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || v < 0) throw ConfigError("ablate." + axis + ": expected an integer >= 0, got '" + value + "'");
  return v;
}

FdsConfig with_setting(FdsConfig cfg, const std::string& axis, const std::string& value) {
  if (axis == "t_trunc") {
    std::size_t used = 0;
    double v = std::nan("");
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size()) throw ConfigError("ablate.t_trunc: expected a number, got '" + value + "'");
    cfg.t_trunc = v;
  } else if (axis == "sigma-kind") {
    cfg.sigma.kind = parse_sigma_kind(value);
  } else if (axis == "n") {
    cfg.n = axis_integer(axis, value);
  } else if (axis == "m") {
    cfg.m = axis_integer(axis, value);
  } else {
    throw ConfigError("ablate.axis must be t_trunc, sigma-kind, n or m (got '" + axis + "')");
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int cmd_train(const CommandContext& ctx) {
  const TrainConfig cfg = ctx.settings.train_config();
  ctx.log << "training " << cfg.steps << " steps on " << describe(cfg.target) << "\n";
  const TrainResult result = train(cfg, [&](const CurvePoint& p) {
    if (p.step % (cfg.log_every * 20) == 0 || p.step == cfg.steps) {
      ctx.log << "  step " << p.step << " loss " << p.loss << "\n";
    }
  });
  write_training(ctx.out, result);
  write_snapshot(ctx);
  return kExitOk;
}

int cmd_sample(const CommandContext& ctx) {
  const Settings& s = ctx.settings;
  const FdsConfig fds = s.fds();
  const Solver solver = s.solver();
  const auto grid = s.grid();
  const Index n = sample_count(s);
  const auto seed = s.seed("seed");
  const bool paired = s.flag("paired");
  const auto wd_times = s.numbers("wd.times");
  require_grid_times(grid, wd_times, "wd.times");
  const TargetSpec target = s.target();
  const Index n_ref = reference_size(s);
  const auto method = s.wd_method();

  const ResolvedField resolved = resolve_field(s, ctx.log);
  const VelocityField& field = *resolved.field;
  if (field.dim() != target_dim(target)) throw ShapeError("field and target dimensions differ");

  RunRecord run = run_pipeline(field, solver, grid, fds, n, seed);
  std::optional<RunRecord> baseline;
  if (paired) {
    FdsConfig off = fds;
    off.m = 0;
    baseline = run_pipeline(field, solver, grid, off, n, seed);
  }
  const WdSeries wd = paired ? wd_over_time(*baseline, &run, target, s.schedule(), wd_times, n_ref, seed, method)
                             : wd_over_time(run, nullptr, target, s.schedule(), wd_times, n_ref, seed, method);
  for (const auto& row : wd.rows) {
    ctx.log << "t=" << row.t << " wd=" << row.wd_baseline;
    if (paired) ctx.log << " wd_fds=" << row.wd_fds;
    ctx.log << "\n";
  }

  if (resolved.trained) write_training(ctx.out, *resolved.trained);
  if (paired) {
    write_run_record(ctx.out, "baseline", *baseline);
    write_run_record(ctx.out, "fds", run);
  } else {
    write_run_record(ctx.out, "run", run);
  }
  write_wd_csv(ctx.out / "wd.csv", wd);
  write_snapshot(ctx);
  return kExitOk;
}

int cmd_verify_theorem(const CommandContext& ctx) {
  const Settings& s = ctx.settings;
  const auto times = s.numbers("verify.times");
  for (double t : times) {
    if (!(t > 0.0)) {
      throw TheoremDomainError("verify.times: t=" + format_double(t) +
                               " has alpha_t = 0, where the identity does not apply");
    }
    if (!(t < 1.0)) {
      throw DomainError("verify.times: t=" + format_double(t) + " has beta_t = 0, where the marginal field is singular");
    }
  }
  const long long points = s.integer("verify.points");
  if (points < 1) throw ConfigError("verify.points must be >= 1");
  const double tol = s.number("verify.tol");
  const auto seed = s.seed("seed");
  if (s.raw("field") != "oracle") ctx.log << "verify-theorem always uses the oracle field\n";
  const auto oracle = build_oracle(s);
  const Index d = oracle->dim();

  std::vector<DiscrepancyReport> reports;
  reports.reserve(static_cast<std::size_t>(points));
  const auto per_time = static_cast<long long>(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    // Spread the points round-robin over the grid.
    const long long count = points / per_time + (static_cast<long long>(j) < points % per_time ? 1 : 0);
    if (count == 0) continue;
    const Mat x = sample_path_points(oracle->schedule(), oracle->target(), count, times[j],
                                     stream_seed(seed, Stream::kQuery, j));
    for (Index i = 0; i < x.rows(); ++i) reports.push_back(oracle->discrepancy_exact(x.row(i).transpose(), times[j]));
  }

  double max_rel = 0.0;
  CsvWriter csv(ctx.out / "theorem.csv");
  std::vector<std::string> cols;
  for (Index k = 0; k < d; ++k) cols.push_back("x" + std::to_string(k));
  for (const char* c : {"t", "lhs", "rhs", "divergence", "rel_error"}) cols.emplace_back(c);
  csv.header(cols);
  for (const auto& r : reports) {
    for (Index k = 0; k < d; ++k) csv.cell(r.x[k]);
    csv.cell(r.t).cell(r.lhs).cell(r.rhs_theorem).cell(r.rhs_surrogate_divergence).cell(r.rel_error);
    csv.end_row();
    max_rel = std::max(max_rel, std::isnan(r.rel_error) ? INFINITY : r.rel_error);
  }
  const bool pass = max_rel <= tol;
  ordered_json summary;
  summary["target"] = describe(s.target());
  summary["k"] = oracle->target().size();
  summary["points"] = reports.size();
  summary["max_rel_error"] = max_rel;
  summary["tolerance"] = tol;
  summary["pass"] = pass;

  csv.close();
  write_json(ctx.out / "theorem_summary.json", summary);
  write_snapshot(ctx);
  ctx.log << (pass ? "PASS" : "FAIL") << " max rel error " << format_double(max_rel) << " over "
          << reports.size() << " points (tolerance " << format_double(tol) << ")\n";
  return pass ? kExitOk : kExitVerification;
}

int cmd_map(const CommandContext& ctx) {
  const Settings& s = ctx.settings;
  const GridSpec grid = s.map_grid();
  const double t = s.number("map.t");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("map.t must lie in (0, 1)");
  const auto oracle = build_oracle(s);
  if (oracle->dim() != 2) throw ShapeError("discrepancy maps need a 2-D target");

  DiscrepancyMap gt = discrepancy_map_gt(*oracle, grid, t);
  DiscrepancyMap surrogate;
  std::optional<TrainResult> trained;
  if (s.raw("field") == "oracle") {
    surrogate = discrepancy_map_surrogate(*oracle, grid, t);
  } else {
    ResolvedField resolved = resolve_field(s, ctx.log);
    surrogate = discrepancy_map_surrogate(*resolved.field, s.schedule(), grid, t);
    trained = std::move(resolved.trained);
  }

  const Vec a = gt.values.reshaped();
  const Vec b = surrogate.values.reshaped();
  ordered_json corr;
  corr["t"] = t;
  corr["resolution"] = grid.resolution;
  corr["bounds"] = {grid.x_lo, grid.x_hi, grid.y_lo, grid.y_hi};
  corr["field"] = s.raw("field") == "oracle" ? "oracle" : s.raw("field");
  corr["spearman"] = spearman(a, b);
  corr["pearson"] = pearson(a, b);
  corr["max_rel_diff"] = ((a - b).cwiseAbs().array() / a.cwiseAbs().array().max(kRelErrorFloor)).maxCoeff();
  ctx.log << "spearman " << format_double(corr["spearman"].get<double>()) << "\n";

  if (trained) write_training(ctx.out, *trained);
  write_map_csv(ctx.out / "map_gt.csv", gt);
  write_map_csv(ctx.out / "map_surrogate.csv", surrogate);
  write_json(ctx.out / "map_correlation.json", corr);
  write_snapshot(ctx);
  return kExitOk;
}

int cmd_ablate(const CommandContext& ctx) {
  const Settings& s = ctx.settings;
  const FdsConfig base = s.fds();
  const Solver solver = s.solver();
  const auto grid = s.grid();
  const Index n = sample_count(s);
  const auto seed = s.seed("seed");
  const std::string axis = s.raw("ablate.axis");
  const auto values = s.list("ablate.values");
  const long long seeds = s.integer("ablate.seeds");
  if (seeds < 1) throw ConfigError("ablate.seeds must be >= 1");
  std::vector<FdsConfig> settings;
  for (const auto& v : values) settings.push_back(with_setting(base, axis, v));
  const TargetSpec target = s.target();
  const Schedule schedule = s.schedule();
  const Index n_ref = reference_size(s);
  const auto method = s.wd_method();

  const ResolvedField resolved = resolve_field(s, ctx.log);
  const VelocityField& field = *resolved.field;
  if (field.dim() != target_dim(target)) throw ShapeError("field and target dimensions differ");

  // Reference clouds depend only on the seed, so every setting is compared
  // against the same draws.
  std::vector<Mat> references;
  for (long long j = 0; j < seeds; ++j) {
    references.push_back(reference_path_samples(schedule, target, n_ref, 1.0, seed + static_cast<std::uint64_t>(j)));
  }

  struct Row {
    std::string setting;
    double mean, stderr_;
    Index nfe;
  };
  std::vector<Row> rows;
  const PipelineOptions lean{false, false};
  for (std::size_t v = 0; v < settings.size(); ++v) {
    std::vector<double> wds;
    Index nfe = 0;
    for (long long j = 0; j < seeds; ++j) {
      const auto run_seed = seed + static_cast<std::uint64_t>(j);
      const RunRecord rec = run_pipeline(field, solver, grid, settings[v], n, run_seed, lean);
      wds.push_back(wasserstein(rec.final_samples, references[static_cast<std::size_t>(j)], method,
                                kDefaultProjections, run_seed).value);
      nfe = rec.total_evals();
    }
    double mean = 0.0;
    for (double w : wds) mean += w;
    mean /= static_cast<double>(wds.size());
    double ss = 0.0;
    for (double w : wds) ss += (w - mean) * (w - mean);
    const double se = wds.size() > 1 ? std::sqrt(ss / static_cast<double>(wds.size() - 1) / static_cast<double>(wds.size())) : 0.0;
    rows.push_back({values[v], mean, se, nfe});
    ctx.log << axis << "=" << values[v] << " wd " << format_double(mean) << " +- " << format_double(se)
            << " nfe " << nfe << "\n";
  }

  if (resolved.trained) write_training(ctx.out, *resolved.trained);
  CsvWriter csv(ctx.out / "ablate.csv");
  csv.comment("axis=" + axis);
  csv.header({"setting", "wd_mean", "wd_stderr", "nfe"});
  for (const auto& r : rows) {
    csv.cell(r.setting).cell(r.mean).cell(r.stderr_).cell(static_cast<long long>(r.nfe));
    csv.end_row();
  }
  csv.close();
  write_snapshot(ctx);
  return kExitOk;
}

}  // namespace fds::app
