#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "app/cli.hpp"
#include "app/settings.hpp"
#include "fds/errors.hpp"

namespace fs = std::filesystem;

namespace fds {
namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "fdslab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = app::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "fdslab_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  EXPECT_TRUE(in.good()) << p;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

void expect_same_files(const fs::path& a, const fs::path& b) {
  ASSERT_EQ(listing(a), listing(b));
  for (const auto& name : listing(a)) EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
}

const std::vector<std::string> kTinyTrain = {"--steps", "40", "--train.batch", "32", "--train.hidden", "8",
                                             "--train.layers", "1", "--train.log-every", "10"};

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& extra) {
  base.insert(base.end(), extra.begin(), extra.end());
  return base;
}

TEST(Settings, LayeringAndAliases) {
  app::Settings s;
  EXPECT_EQ(s.raw("fds.m"), "0");
  s.apply_preset("toy-fig3a");
  EXPECT_EQ(s.raw("fds.m"), "1");
  EXPECT_EQ(s.raw("solver"), "euler");
  EXPECT_EQ(s.raw("steps"), "20");
  EXPECT_EQ(s.raw("fds.sigma-kind"), "constant");
  EXPECT_EQ(s.number("fds.sigma-max"), 0.3);
  s.apply_text("# comment\nsigma.max = 0.5\nt_trunc=0.4\n", "inline");
  EXPECT_EQ(s.fds().sigma.sigma_max, 0.5);
  EXPECT_EQ(s.fds().t_trunc, 0.4);
  EXPECT_THROW(s.apply_text("bogus=1\n", "inline"), ConfigError);
  EXPECT_THROW(s.apply_text("no equals sign\n", "inline"), ConfigError);
  EXPECT_THROW(s.apply_preset("fig9"), ConfigError);
  s.set("n", "abc");
  EXPECT_THROW(s.integer("n"), ConfigError);
  app::Settings round;
  round.apply_text(s.snapshot(), "snapshot");
  EXPECT_EQ(round.snapshot(), s.snapshot());
}

TEST(Settings, CustomMixture) {
  app::Settings s;
  s.set("target", "gmm");
  s.set("gmm.means", "-3,0;3,0");
  s.set("gmm.stddevs", "1,0.5");
  const auto spec = s.target();
  const auto& g = std::get<GaussianMixture>(spec);
  ASSERT_EQ(g.means.size(), 2u);
  EXPECT_EQ(g.means[1][0], 3.0);
  EXPECT_EQ(g.stddevs[1], 0.5);
  EXPECT_EQ(g.weights, (std::vector<double>{1, 1}));
  s.set("gmm.weights", "1,-1");
  EXPECT_THROW(s.target(), ConfigError);
}

TEST(CliTrain, DeterministicCheckpointsAndCurve) {
  const auto a = fresh_dir("train_a"), b = fresh_dir("train_b");
  ASSERT_EQ(run(with({"train", "--seed", "1", "--out", a.string()}, kTinyTrain)).code, 0);
  ASSERT_EQ(run(with({"train", "--seed", "1", "--out", b.string()}, kTinyTrain)).code, 0);
  EXPECT_EQ(listing(a), (std::vector<std::string>{"config.txt", "model.json", "train_curve.csv"}));
  expect_same_files(a, b);
  EXPECT_NE(slurp(a / "config.txt").find("train.steps=40\n"), std::string::npos);
}

TEST(CliTrain, MissingOutputDirectoryFailsWithoutWriting) {
  const auto root = fresh_dir("train_missing");
  const auto r = run(with({"train", "--out", (root / "nope").string()}, kTinyTrain));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("does not exist"), std::string::npos);
  EXPECT_TRUE(listing(root).empty());
}

TEST(CliTrain, DivergentTrainingIsNumericalFailure) {
  const auto dir = fresh_dir("train_nan");
  const auto r = run(with({"train", "--train.lr", "1e300", "--out", dir.string()}, kTinyTrain));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("step"), std::string::npos);
  EXPECT_TRUE(listing(dir).empty());
}

TEST(CliSample, PairedRunsShareInitialStatesAndMZeroMatchesBaseline) {
  const auto paired = fresh_dir("sample_paired"), off = fresh_dir("sample_off");
  const std::vector<std::string> common = {"--preset", "toy-fig3a", "--field", "oracle", "--oracle.k", "400",
                                           "--n", "32", "--seed", "4"};
  ASSERT_EQ(run(with(with({"sample", "--paired", "--out", paired.string()}, common), {})).code, 0);
  ASSERT_EQ(run(with({"sample", "--fds.m", "0", "--out", off.string()}, common)).code, 0);
  for (const char* name : {"baseline.json", "baseline_states.csv", "fds.json", "fds_states.csv",
                           "fds_divergence.csv", "wd.csv", "config.txt"}) {
    EXPECT_TRUE(fs::exists(paired / name)) << name;
  }
  EXPECT_EQ(slurp(off / "run.json"), slurp(paired / "baseline.json"));
  EXPECT_EQ(slurp(off / "run_states.csv"), slurp(paired / "baseline_states.csv"));
  EXPECT_EQ(slurp(off / "run_divergence.csv"), slurp(paired / "baseline_divergence.csv"));

  // Step-0 pre-refinement rows agree between baseline and refined runs.
  std::ifstream b(paired / "baseline_states.csv"), f(paired / "fds_states.csv");
  std::string lb, lf;
  for (int i = 0; i < 33; ++i) {
    std::getline(b, lb);
    std::getline(f, lf);
    EXPECT_EQ(lb, lf);
  }
  const std::string cfg = slurp(paired / "config.txt");
  for (const char* line : {"solver=euler\n", "steps=20\n", "fds.sigma-kind=constant\n", "fds.sigma-max=0.3\n",
                           "fds.m=1\n", "fds.n=1\n", "paired=true\n"}) {
    EXPECT_NE(cfg.find(line), std::string::npos) << line;
  }
  EXPECT_NE(slurp(paired / "wd.csv").find("t,wd_baseline,wd_fds,method,n,seed"), std::string::npos);
}

TEST(CliSample, ConfigSnapshotReproducesRun) {
  const auto a = fresh_dir("snap_a"), b = fresh_dir("snap_b"), c = fresh_dir("snap_c");
  ASSERT_EQ(run({"sample", "--field", "oracle", "--oracle.k", "300", "--n", "16", "--steps", "10", "--fds.m", "2",
                 "--fds.n", "2", "--fds.div", "hutch:2", "--solver", "heun", "--wd.times", "0,0.5,1", "--out",
                 a.string()}).code,
            0);
  ASSERT_EQ(run({"sample", "--config", (a / "config.txt").string(), "--out", b.string()}).code, 0);
  expect_same_files(a, b);
  // Explicit flags override the config file.
  ASSERT_EQ(run({"sample", "--config", (a / "config.txt").string(), "--seed", "2", "--out", c.string()}).code, 0);
  EXPECT_NE(slurp(a / "run.json"), slurp(c / "run.json"));
}

TEST(CliSample, CheckpointFieldSource) {
  const auto model = fresh_dir("ckpt_model"), out = fresh_dir("ckpt_sample");
  ASSERT_EQ(run(with({"train", "--out", model.string()}, kTinyTrain)).code, 0);
  const auto r = run({"sample", "--field", (model / "model.json").string(), "--n", "8", "--steps", "4",
                      "--wd.times", "1", "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"sample", "--field", (model / "missing.json").string(), "--out", out.string()}).code, 2);
  EXPECT_EQ(run({"sample", "--field", (model / "model.json").string(), "--target", "single:1,2,3", "--out",
                 out.string()}).code,
            2);
}

TEST(CliSample, RejectsBadConfiguration) {
  const auto dir = fresh_dir("sample_bad");
  EXPECT_EQ(run({"sample", "--bogus", "1", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"sample", "--solver", "rk4", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"sample", "--preset", "nope", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"sample", "--oracle.k", "50", "--wd.times", "0.33", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"sample", "--fds.t-trunc", "2", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_TRUE(listing(dir).empty());
}

TEST(CliSample, OutputRootFromEnvironment) {
  const auto dir = fresh_dir("env_out");
  ::setenv("FDSLAB_OUT", dir.string().c_str(), 1);
  const auto r = run({"sample", "--oracle.k", "50", "--n", "4", "--steps", "2", "--wd.times", "1"});
  ::unsetenv("FDSLAB_OUT");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "run.json"));
}

TEST(CliVerify, SinglePointRowsAreZero) {
  const auto dir = fresh_dir("verify_single");
  const auto r = run({"verify-theorem", "--target", "single:1,-1", "--verify.points", "50", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "theorem.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x0,x1,t,lhs,rhs,divergence,rel_error");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    EXPECT_EQ(cells[3], "0");
    EXPECT_EQ(cells[4], "0");
  }
  EXPECT_EQ(rows, 50);
}

TEST(CliVerify, MixtureIdentityHolds) {
  const auto dir = fresh_dir("verify_gmm");
  const auto r = run({"verify-theorem", "--preset", "theorem-check", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string summary = slurp(dir / "theorem_summary.json");
  EXPECT_NE(summary.find("\"points\": 1000"), std::string::npos);
  EXPECT_NE(summary.find("\"pass\": true"), std::string::npos);
  const auto pos = summary.find("\"max_rel_error\": ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LT(std::stod(summary.substr(pos + 17)), 1e-8);
}

TEST(CliVerify, RefusesTimeZeroAndReportsFailures) {
  const auto dir = fresh_dir("verify_t0");
  const auto r = run({"verify-theorem", "--verify.times", "0,0.5", "--oracle.k", "16", "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("theorem domain"), std::string::npos);
  EXPECT_TRUE(listing(dir).empty());
  // A zero tolerance cannot be met by rounding-level errors.
  const auto strict = run({"verify-theorem", "--target", "gmm", "--oracle.k", "64", "--verify.tol", "0",
                           "--out", dir.string()});
  EXPECT_EQ(strict.code, 4);
  EXPECT_NE(strict.err.find("FAIL"), std::string::npos);
}

TEST(CliMap, OracleAgainstItselfAndHeaderEcho) {
  const auto dir = fresh_dir("map_oracle");
  const auto r = run({"map", "--field", "oracle", "--oracle.k", "2000", "--map.resolution", "12", "--map.bounds",
                      "-1.5,2.25,-2,1.75", "--map.t", "0.6", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string corr = slurp(dir / "map_correlation.json");
  const auto pos = corr.find("\"spearman\": ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(corr.substr(pos + 12)), 1.0, 1e-8);
  for (const char* name : {"map_gt.csv", "map_surrogate.csv"}) {
    std::ifstream in(dir / name);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# bounds=-1.5,2.25,-2,1.75");
    std::getline(in, line);
    EXPECT_EQ(line, "# resolution=12");
  }
  EXPECT_EQ(run({"map", "--map.t", "1", "--oracle.k", "10", "--out", dir.string()}).code, 2);
}

TEST(CliAblate, NfeColumnAndTruncationBaseline) {
  const auto dir = fresh_dir("ablate_m");
  const std::vector<std::string> common = {"--field", "oracle", "--oracle.k", "300", "--n", "24", "--steps", "10",
                                           "--ablate.seeds", "3", "--fds.sigma-max", "0.3"};
  ASSERT_EQ(run(with({"ablate", "--ablate.axis", "n", "--ablate.values", "0,1,3", "--fds.m", "2", "--out",
                      dir.string()},
                     common))
                .code,
            0);
  std::ifstream in(dir / "ablate.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# axis=n");
  std::getline(in, line);
  EXPECT_EQ(line, "setting,wd_mean,wd_stderr,nfe");
  for (long long n_iter : {0, 1, 3}) {
    std::getline(in, line);
    const long long nfe = std::stoll(line.substr(line.rfind(',') + 1));
    // steps * 1 + refined steps * N * (M + 1) * d, per sample, times 24 samples.
    EXPECT_EQ(nfe, 24 * (10 + 10 * n_iter * 3 * 2)) << line;
  }

  const auto trunc = fresh_dir("ablate_trunc"), base = fresh_dir("ablate_base");
  ASSERT_EQ(run(with({"ablate", "--ablate.axis", "t_trunc", "--ablate.values", "0,0.5", "--fds.m", "1", "--fds.n",
                      "1", "--out", trunc.string()},
                     common))
                .code,
            0);
  ASSERT_EQ(run(with({"ablate", "--ablate.axis", "m", "--ablate.values", "0", "--out", base.string()}, common)).code,
            0);
  std::ifstream t(trunc / "ablate.csv"), b(base / "ablate.csv");
  std::string lt, lb;
  for (int i = 0; i < 3; ++i) {
    std::getline(t, lt);
    std::getline(b, lb);
  }
  EXPECT_EQ(lt.substr(lt.find(',')), lb.substr(lb.find(',')));
  EXPECT_EQ(run(with({"ablate", "--ablate.axis", "sigma", "--out", base.string()}, common)).code, 2);
}

TEST(CliBinary, ExitCodesThroughTheExecutable) {
  const auto dir = fresh_dir("binary");
  const std::string exe = FDSLAB_CLI_PATH;
  const auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(exe + " --help"), 0);
  EXPECT_EQ(status(exe + " sample --out " + (dir / "missing").string()), 2);
  EXPECT_EQ(status(exe + " verify-theorem --target single:0.5,0.5 --verify.points 10 --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "theorem.csv"));
}

}  // namespace
}  // namespace fds
