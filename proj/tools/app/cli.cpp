#include "app/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>

#include "app/commands.hpp"
#include "fds/errors.hpp"

namespace fds::app {
namespace {

struct Subcommand {
  CLI::App* app;
  std::function<int(const CommandContext&)> run;
  std::map<std::string, std::string> values;  // option name -> raw value
  std::map<std::string, std::string> key_of;  // option name -> setting key
  std::string preset, config, out;
  bool paired = false;
};

void register_options(Subcommand& sub, bool steps_means_training) {
  for (const auto& k : known_keys()) {
    if (k.key == "paired") continue;
    std::string option = k.key;
    if (steps_means_training && k.key == "train.steps") continue;
    std::string key = k.key;
    if (steps_means_training && k.key == "steps") key = "train.steps";
    sub.key_of[option] = key;
    std::string help = k.help + (k.default_value.empty() ? "" : " [" + k.default_value + "]");
    if (option != key) help = "optimizer steps [20000]";
    sub.app->add_option("--" + option, sub.values[option], help);
  }
  for (const auto& [alias, key] : {std::pair{"sigma.kind", "fds.sigma-kind"}, std::pair{"sigma.max", "fds.sigma-max"},
                                   std::pair{"t_trunc", "fds.t-trunc"}}) {
    sub.key_of[alias] = key;
    sub.app->add_option(std::string("--") + alias, sub.values[alias], std::string("alias of --") + key);
  }
  std::string presets;
  for (const auto& p : preset_names()) presets += (presets.empty() ? "" : " | ") + p;
  sub.app->add_option("--preset", sub.preset, presets);
  sub.app->add_option("--config", sub.config, "file of key=value lines");
  sub.app->add_option("--out", sub.out, "existing output directory [$FDSLAB_OUT or .]");
  sub.app->add_flag("--paired", sub.paired, "also run the unrefined baseline from the same prior draws");
}

Settings resolve(const Subcommand& sub) {
  Settings s;
  // A preset named in the config file is applied where it appears; a preset
  // flag comes first so the file and explicit flags can override it.
  if (!sub.preset.empty()) s.apply_preset(sub.preset);
  if (!sub.config.empty()) s.apply_file(sub.config);
  for (const auto& [option, key] : sub.key_of) {
    if (sub.app->count("--" + option) > 0) s.set(key, sub.values.at(option));
  }
  if (sub.paired) s.set("paired", "true");
  return s;
}

std::filesystem::path output_dir(const Subcommand& sub) {
  std::string dir = sub.out;
  if (dir.empty()) {
    const char* env = std::getenv("FDSLAB_OUT");
    dir = (env != nullptr && *env != '\0') ? env : ".";
  }
  const std::filesystem::path p(dir);
  if (!std::filesystem::is_directory(p)) throw ConfigError("output directory " + dir + " does not exist");
  return p;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fdslab: flow matching lab with divergence-guided sampling refinement"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Subcommand>> subs;
  auto add = [&](const char* name, const char* help, std::function<int(const CommandContext&)> run) {
    auto sub = std::make_unique<Subcommand>();
    sub->app = app.add_subcommand(name, help);
    sub->run = std::move(run);
    register_options(*sub, std::string(name) == "train");
    subs.push_back(std::move(sub));
  };
  add("train", "fit the velocity network; writes model.json and train_curve.csv", cmd_train);
  add("sample", "integrate with optional refinement; writes run records and wd.csv", cmd_sample);
  add("verify-theorem", "check the residual/divergence identity on the oracle field", cmd_verify_theorem);
  add("map", "ground-truth and surrogate discrepancy maps with their correlation", cmd_map);
  add("ablate", "sweep one refinement setting; writes ablate.csv", cmd_ablate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fdslab: " << e.what() << "\n";
    return kExitConfig;
  }

  for (const auto& sub : subs) {
    if (!sub->app->parsed()) continue;
    try {
      CommandContext ctx{resolve(*sub), output_dir(*sub), err};
      return sub->run(ctx);
    } catch (const ConfigError& e) {
      err << "fdslab: config error: " << e.what() << "\n";
      return kExitConfig;
    } catch (const TheoremDomainError& e) {
      err << "fdslab: theorem domain error: " << e.what() << "\n";
      return kExitConfig;
    } catch (const DomainError& e) {
      err << "fdslab: domain error: " << e.what() << "\n";
      return kExitConfig;
    } catch (const TrainingError& e) {
      err << "fdslab: training failed at step " << e.step() << ": " << e.what() << "\n";
      return kExitNumerical;
    } catch (const NumericalError& e) {
      err << "fdslab: numerical failure: " << e.what() << "\n";
      return kExitNumerical;
    } catch (const std::exception& e) {
      err << "fdslab: " << e.what() << "\n";
      return kExitFailure;
    }
  }
  return kExitFailure;
}

}  // namespace fds::app
