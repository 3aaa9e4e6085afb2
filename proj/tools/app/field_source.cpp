#include "app/field_source.hpp"

#include <ostream>

#include "fds/errors.hpp"

namespace fds::app {

std::unique_ptr<OracleField> build_oracle(const Settings& s) {
  const long long k = s.integer("oracle.k");
  if (k < 1) throw ConfigError("oracle.k must be >= 1");
  return std::make_unique<OracleField>(build_empirical(s.target(), k, s.seed("oracle.seed")), s.schedule());
}

ResolvedField resolve_field(const Settings& s, std::ostream& log) {
  const std::string& source = s.raw("field");
  ResolvedField out;
  if (source == "oracle") {
    out.field = build_oracle(s);
    out.description = "oracle";
    return out;
  }
  if (source == "train") {
    const TrainConfig cfg = s.train_config();
    log << "training " << cfg.steps << " steps on " << describe(cfg.target) << "\n";
    out.trained = train(cfg, [&](const CurvePoint& p) {
      if (p.step % (cfg.log_every * 20) == 0 || p.step == cfg.steps) {
        log << "  step " << p.step << " loss " << p.loss << "\n";
      }
    });
    out.field = std::make_unique<MlpField>(out.trained->field);
    out.description = "train";
    return out;
  }
  const std::filesystem::path path(source);
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("field: '" + source + "' is not oracle, train, or an existing checkpoint");
  }
  auto net = std::make_unique<MlpField>(MlpField::load(path));
  if (net->dim() != target_dim(s.target())) {
    throw ShapeError("checkpoint " + source + " has dimension " + std::to_string(net->dim()) +
                     " but the target has dimension " + std::to_string(target_dim(s.target())));
  }
  out.field = std::move(net);
  out.description = path.filename().string();
  return out;
}

}  // namespace fds::app
