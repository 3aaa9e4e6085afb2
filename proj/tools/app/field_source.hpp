#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "app/settings.hpp"
#include "fds/mlp_field.hpp"
#include "fds/oracle_field.hpp"

namespace fds::app {

// Oracle field over oracle.k points of the configured target.
std::unique_ptr<OracleField> build_oracle(const Settings& s);

// The velocity field named by `field`: the oracle, a freshly trained
// network, or a checkpoint on disk. A trained network is kept in `trained`
// so the caller can write it next to its other outputs.
struct ResolvedField {
  std::unique_ptr<VelocityField> field;
  std::optional<TrainResult> trained;
  std::string description;
};

ResolvedField resolve_field(const Settings& s, std::ostream& log);

}  // namespace fds::app
