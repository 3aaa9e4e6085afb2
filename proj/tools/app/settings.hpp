#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fds/metrics.hpp"
#include "fds/sampler.hpp"
#include "fds/schedules.hpp"
#include "fds/target.hpp"
#include "fds/train.hpp"

namespace fds::app {

struct KeyInfo {
  std::string key;
  std::string default_value;
  std::string help;
};

// Every recognized setting with its default, in snapshot order.
const std::vector<KeyInfo>& known_keys();
bool is_known_key(std::string_view key);
// Accepts the short spellings sigma.kind, sigma.max and t_trunc.
std::string canonical_key(std::string_view key);

std::vector<std::string> preset_names();

// Flat string settings resolved from defaults < preset < config file < flags.
class Settings {
 public:
  Settings();

  void set(std::string_view key, std::string value);
  const std::string& raw(std::string_view key) const;
  bool is_default(std::string_view key) const;

  void apply_preset(std::string_view name);
  // Lines of key=value; blank lines and lines starting with '#' are skipped.
  void apply_file(const std::filesystem::path& path);
  void apply_text(std::string_view text, const std::string& origin);

  double number(std::string_view key) const;
  long long integer(std::string_view key) const;
  std::uint64_t seed(std::string_view key) const;
  bool flag(std::string_view key) const;
  std::vector<double> numbers(std::string_view key) const;
  std::vector<std::string> list(std::string_view key) const;

  // key=value lines for every setting; re-applying it reproduces the run.
  std::string snapshot() const;

  TargetSpec target() const;
  Schedule schedule() const;
  TrainConfig train_config() const;
  FdsConfig fds() const;
  Solver solver() const;
  std::vector<double> grid() const;
  GridSpec map_grid() const;
  WassersteinMethod wd_method() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::map<std::string, bool, std::less<>> touched_;
};

}  // namespace fds::app
