#pragma once

#include <filesystem>
#include <iosfwd>

#include "app/settings.hpp"

namespace fds::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitVerification = 4,
};

struct CommandContext {
  Settings settings;
  std::filesystem::path out;
  std::ostream& log;
};

// Each command computes everything first and writes its files last, so a
// failing run leaves nothing behind in the output directory.
int cmd_train(const CommandContext& ctx);
int cmd_sample(const CommandContext& ctx);
int cmd_verify_theorem(const CommandContext& ctx);
int cmd_map(const CommandContext& ctx);
int cmd_ablate(const CommandContext& ctx);

}  // namespace fds::app
