#pragma once

#include <filesystem>
#include <string>

#include "fds/sampler.hpp"

namespace fds {

// Summary document for a run: config snapshot, NFE accounting, per-step
// mean divergence before/after refinement.
std::string run_summary_json(const RunRecord& rec);

// Writes <prefix>.json, <prefix>_states.csv (every recorded state, pre and
// post refinement) and <prefix>_divergence.csv (refinement log).
void write_run_record(const std::filesystem::path& dir, const std::string& prefix, const RunRecord& rec);

}  // namespace fds
