#include "app/settings.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fds/errors.hpp"

namespace fds::app {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

const std::map<std::string, std::vector<std::pair<std::string, std::string>>, std::less<>>& presets() {
  static const std::map<std::string, std::vector<std::pair<std::string, std::string>>, std::less<>> p = {
      {"toy-fig3a",
       {{"target", "checkerboard"}, {"field", "train"}, {"solver", "euler"}, {"steps", "20"},
        {"n", "512"}, {"fds.m", "1"}, {"fds.n", "1"}, {"fds.sigma-kind", "constant"},
        {"fds.sigma-max", "0.3"}, {"fds.t-trunc", "1"}, {"fds.div", "exact"}}},
      {"theorem-check",
       {{"target", "gmm"}, {"oracle.k", "256"}, {"verify.points", "1000"},
        {"verify.times", "0.05,0.15,0.25,0.35,0.45,0.55,0.65,0.75,0.85,0.95"}}},
      {"map-fig3c",
       {{"target", "checkerboard"}, {"field", "train"}, {"map.t", "0.6"}, {"map.resolution", "64"},
        {"map.bounds", "-2,2,-2,2"}}},
      {"ablate-fig6",
       {{"target", "checkerboard"}, {"field", "train"}, {"solver", "euler"}, {"steps", "20"},
        {"n", "512"}, {"fds.m", "1"}, {"fds.n", "1"}, {"fds.sigma-kind", "cosine"},
        {"fds.sigma-max", "0.3"}, {"ablate.axis", "t_trunc"}, {"ablate.values", "0,0.25,0.5,0.75,1"}}},
      {"ablate-fig7",
       {{"target", "checkerboard"}, {"field", "train"}, {"solver", "euler"}, {"steps", "20"},
        {"n", "512"}, {"fds.m", "1"}, {"fds.n", "1"}, {"fds.sigma-kind", "constant"},
        {"fds.sigma-max", "0.3"}, {"fds.t-trunc", "1"}, {"ablate.axis", "m"}, {"ablate.values", "0,1,2,8"}}},
  };
  return p;
}

}  // namespace

const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = {
      {"seed", "1", "base seed for sampling, training and reference draws"},
      {"target", "checkerboard", "checkerboard | gmm | single:x,y | file:<csv>"},
      {"gmm.means", "", "semicolon-separated component means, e.g. -3,0;3,0 (empty: 8-mode ring)"},
      {"gmm.weights", "", "comma-separated component weights"},
      {"gmm.stddevs", "", "comma-separated isotropic standard deviations"},
      {"schedule", "linear", "interpolant schedule"},
      {"field", "oracle", "oracle | train | <checkpoint path>"},
      {"oracle.k", "100000", "empirical target size for the oracle field"},
      {"oracle.seed", "1", "seed for the oracle's target points"},
      {"solver", "euler", "euler | heun"},
      {"steps", "20", "solver steps on a uniform grid (train: optimizer steps)"},
      {"n", "512", "number of samples"},
      {"paired", "false", "sample: also run the unrefined baseline from the same prior draws"},
      {"fds.m", "0", "perturbation candidates per iteration (0 disables refinement)"},
      {"fds.n", "0", "refinement iterations (0 disables refinement)"},
      {"fds.sigma-kind", "constant", "cosine | linear | concave | constant"},
      {"fds.sigma-max", "0.3", "perturbation scale at t = 0"},
      {"fds.t-trunc", "1", "refinement runs only for t < t_trunc"},
      {"fds.div", "exact", "exact | hutch:<probes> | hutch-rademacher:<probes>"},
      {"train.steps", "20000", "optimizer steps"},
      {"train.batch", "512", "batch size"},
      {"train.lr", "0.001", "Adam learning rate"},
      {"train.seed", "", "training seed (empty: use seed)"},
      {"train.hidden", "128", "hidden width"},
      {"train.layers", "3", "hidden layers"},
      {"train.log-every", "100", "steps per training-curve point"},
      {"wd.times", "0,0.25,0.5,0.75,1", "grid times at which W2 to the exact path is reported"},
      {"wd.n-ref", "0", "reference samples per time (0: same as n)"},
      {"wd.method", "auto", "auto | exact | sliced"},
      {"verify.times", "0.05,0.15,0.25,0.35,0.45,0.55,0.65,0.75,0.85,0.95", "times for the identity check"},
      {"verify.points", "1000", "points drawn from the path, spread over verify.times"},
      {"verify.tol", "1e-06", "maximum accepted relative error"},
      {"map.t", "0.6", "time of the discrepancy maps"},
      {"map.resolution", "64", "cells per axis"},
      {"map.bounds", "-2,2,-2,2", "x_lo,x_hi,y_lo,y_hi"},
      {"ablate.axis", "m", "t_trunc | sigma-kind | n | m"},
      {"ablate.values", "0,1,2,8", "comma-separated settings for the swept axis"},
      {"ablate.seeds", "10", "seeds per setting (seed, seed+1, ...)"},
  };
  return keys;
}

bool is_known_key(std::string_view key) {
  const auto& keys = known_keys();
  return std::any_of(keys.begin(), keys.end(), [&](const KeyInfo& k) { return k.key == key; });
}

std::string canonical_key(std::string_view key) {
  if (key == "sigma.kind") return "fds.sigma-kind";
  if (key == "sigma.max") return "fds.sigma-max";
  if (key == "t_trunc") return "fds.t-trunc";
  return std::string(key);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : presets()) names.push_back(name);
  return names;
}

Settings::Settings() {
  for (const auto& k : known_keys()) values_[k.key] = k.default_value;
}

void Settings::set(std::string_view key, std::string value) {
  const std::string k = canonical_key(key);
  if (!is_known_key(k)) throw ConfigError("unknown setting '" + std::string(key) + "'");
  values_[k] = trim(value);
  touched_[k] = true;
}

const std::string& Settings::raw(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown setting '" + std::string(key) + "'");
  return it->second;
}

bool Settings::is_default(std::string_view key) const { return touched_.find(key) == touched_.end(); }

void Settings::apply_preset(std::string_view name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("unknown preset '" + std::string(name) + "'");
  for (const auto& [k, v] : it->second) set(k, v);
}

void Settings::apply_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  apply_text(ss.str(), path.string());
}

void Settings::apply_text(std::string_view text, const std::string& origin) {
  std::size_t lineno = 0;
  for (const auto& line : split(text, '\n')) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key == "preset") {
      apply_preset(trim(std::string_view(line).substr(eq + 1)));
      continue;
    }
    try {
      set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

double Settings::number(std::string_view key) const { return parse_number(std::string(key), raw(key)); }

long long Settings::integer(std::string_view key) const {
  const std::string& s = raw(key);
  long long v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t Settings::seed(std::string_view key) const {
  const long long v = integer(key);
  if (v < 0) throw ConfigError(std::string(key) + ": seed must be >= 0");
  return static_cast<std::uint64_t>(v);
}

bool Settings::flag(std::string_view key) const {
  const std::string& s = raw(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no" || s.empty()) return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + s + "'");
}

std::vector<double> Settings::numbers(std::string_view key) const {
  std::vector<double> out;
  for (const auto& item : list(key)) out.push_back(parse_number(std::string(key), item));
  return out;
}

std::vector<std::string> Settings::list(std::string_view key) const {
  const std::string& s = raw(key);
  if (s.empty()) throw ConfigError(std::string(key) + ": empty list");
  auto items = split(s, ',');
  for (const auto& item : items) {
    if (item.empty()) throw ConfigError(std::string(key) + ": empty list entry in '" + s + "'");
  }
  return items;
}

std::string Settings::snapshot() const {
  std::string out = "# fdslab settings; re-run with --config <this file>\n";
  for (const auto& k : known_keys()) out += k.key + "=" + raw(k.key) + "\n";
  return out;
}

TargetSpec Settings::target() const {
  TargetSpec spec = parse_target(raw("target"));
  if (auto* g = std::get_if<GaussianMixture>(&spec); g != nullptr && !raw("gmm.means").empty()) {
    GaussianMixture custom;
    for (const auto& mean : split(raw("gmm.means"), ';')) {
      const auto coords = split(mean, ',');
      Vec m(static_cast<Index>(coords.size()));
      for (std::size_t i = 0; i < coords.size(); ++i) m[static_cast<Index>(i)] = parse_number("gmm.means", coords[i]);
      custom.means.push_back(m);
    }
    const std::size_t c = custom.means.size();
    custom.weights = raw("gmm.weights").empty() ? std::vector<double>(c, 1.0) : numbers("gmm.weights");
    custom.stddevs = raw("gmm.stddevs").empty() ? std::vector<double>(c, 1.0) : numbers("gmm.stddevs");
    spec = custom;
    // Draw once to run the mixture's own validation.
    (void)sample_target(spec, 1, 0);
  }
  return spec;
}

Schedule Settings::schedule() const { return parse_schedule(raw("schedule")); }

TrainConfig Settings::train_config() const {
  TrainConfig cfg;
  const long long steps = integer("train.steps");
  const long long batch = integer("train.batch");
  const long long log_every = integer("train.log-every");
  if (steps < 1 || batch < 1 || log_every < 1) {
    throw ConfigError("train.steps, train.batch and train.log-every must be >= 1");
  }
  cfg.steps = static_cast<std::size_t>(steps);
  cfg.batch = batch;
  cfg.learning_rate = number("train.lr");
  cfg.seed = raw("train.seed").empty() ? seed("seed") : seed("train.seed");
  cfg.target = target();
  cfg.schedule = schedule();
  cfg.hidden = integer("train.hidden");
  cfg.hidden_layers = integer("train.layers");
  cfg.log_every = static_cast<std::size_t>(log_every);
  if (cfg.hidden < 1 || cfg.hidden_layers < 1) throw ConfigError("train.hidden and train.layers must be >= 1");
  return cfg;
}

FdsConfig Settings::fds() const {
  FdsConfig cfg;
  cfg.m = integer("fds.m");
  cfg.n = integer("fds.n");
  cfg.sigma.kind = parse_sigma_kind(raw("fds.sigma-kind"));
  cfg.sigma.sigma_max = number("fds.sigma-max");
  cfg.t_trunc = number("fds.t-trunc");
  cfg.divergence = parse_divergence(raw("fds.div"));
  cfg.validate();
  return cfg;
}

Solver Settings::solver() const { return parse_solver(raw("solver")); }

std::vector<double> Settings::grid() const {
  const long long steps = integer("steps");
  if (steps < 1) throw ConfigError("steps must be >= 1");
  return uniform_grid(static_cast<std::size_t>(steps));
}

GridSpec Settings::map_grid() const {
  const auto b = numbers("map.bounds");
  if (b.size() != 4) throw ConfigError("map.bounds needs x_lo,x_hi,y_lo,y_hi");
  GridSpec g{b[0], b[1], b[2], b[3], integer("map.resolution")};
  g.validate();
  return g;
}

WassersteinMethod Settings::wd_method() const { return parse_wasserstein_method(raw("wd.method")); }

}  // namespace fds::app
