#include "fds/run_io.hpp"

#include <json.hpp>

#include "fds/csv.hpp"

namespace fds {

std::string run_summary_json(const RunRecord& rec) {
  nlohmann::ordered_json j;
  j["solver"] = to_string(rec.solver);
  j["steps"] = rec.steps();
  j["n"] = rec.n;
  j["d"] = rec.d;
  j["seed"] = rec.seed;
  j["fds"] = {{"m", rec.fds.m},
              {"n", rec.fds.n},
              {"sigma_kind", to_string(rec.fds.sigma.kind)},
              {"sigma_max", rec.fds.sigma.sigma_max},
              {"t_trunc", rec.fds.t_trunc},
              {"divergence", to_string(rec.fds.divergence)}};
  j["grid"] = rec.grid;
  std::vector<int> refined;
  for (char c : rec.refined_step) refined.push_back(c ? 1 : 0);
  j["refined_step"] = refined;
  j["nfe"] = {{"solver", rec.solver_evals},
              {"refine", rec.refine_evals},
              {"total", rec.total_evals()},
              {"per_sample", static_cast<double>(rec.total_evals()) / static_cast<double>(rec.n)}};
  j["heun_fallback"] = rec.heun_fallback;
  if (rec.div_pre.size() > 0) {
    std::vector<double> pre, post;
    for (Index k = 0; k < rec.div_pre.rows(); ++k) {
      pre.push_back(rec.div_pre.row(k).mean());
      post.push_back(rec.div_post.row(k).mean());
    }
    j["mean_divergence_pre"] = pre;
    j["mean_divergence_post"] = post;
  }
  return j.dump(2) + "\n";
}

void write_run_record(const std::filesystem::path& dir, const std::string& prefix, const RunRecord& rec) {
  write_text_file(dir / (prefix + ".json"), run_summary_json(rec));

  CsvWriter states(dir / (prefix + "_states.csv"));
  std::vector<std::string> cols{"step", "t", "phase", "sample"};
  for (Index j = 0; j < rec.d; ++j) cols.push_back("x" + std::to_string(j));
  states.header(cols);
  auto emit = [&](std::size_t k, const char* phase, const Mat& m) {
    for (Index i = 0; i < m.rows(); ++i) {
      states.cell(static_cast<long long>(k)).cell(rec.grid[k]).cell(std::string(phase)).cell(static_cast<long long>(i));
      for (Index j = 0; j < m.cols(); ++j) states.cell(m(i, j));
      states.end_row();
    }
  };
  for (std::size_t k = 0; k < rec.states.size(); ++k) {
    emit(k, "pre", rec.states[k]);
    if (k < rec.refined.size() && rec.refined_step[k]) emit(k, "post", rec.refined[k]);
  }
  states.close();

  CsvWriter div(dir / (prefix + "_divergence.csv"));
  div.header({"step", "t", "sample", "iteration", "incumbent_divergence", "chosen_divergence", "chosen_index"});
  for (const auto& e : rec.log) {
    div.cell(static_cast<long long>(e.step))
        .cell(rec.grid[static_cast<std::size_t>(e.step)])
        .cell(static_cast<long long>(e.sample))
        .cell(static_cast<long long>(e.iteration))
        .cell(e.incumbent_divergence)
        .cell(e.chosen_divergence)
        .cell(static_cast<long long>(e.chosen_index));
    div.end_row();
  }
  div.close();
}

}  // namespace fds
