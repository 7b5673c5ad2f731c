#include "offtrc/core/env.hpp"
#include "offtrc/harness/agent.hpp"
#include "offtrc/harness/evaluate.hpp"
#include "offtrc/harness/plot.hpp"
#include "offtrc/harness/sweep.hpp"
#include "offtrc/harness/train_config.hpp"
#include "offtrc/harness/trainer.hpp"
#include "offtrc/harness/verify.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace offtrc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("offtrc_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

// A few seconds of training on a small network.
TrainConfig small_config(const fs::path& out, const std::string& env = "pointnav") {
  TrainConfig cfg;
  cfg.env = env;
  cfg.epochs = 4;
  cfg.collect_steps = 200;
  cfg.batch_size = 400;
  cfg.replay_length = 2000;
  cfg.policy_hidden = {16};
  cfg.critic_hidden = {16};
  cfg.critic_rounds = 2;
  cfg.critic_minibatch = 100;
  cfg.checkpoint_every = 2;
  cfg.output_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("config precedence is overrides, then file, then defaults") {
  const auto dir = scratch_dir("config");
  const auto file = dir / "run.cfg";
  std::ofstream(file) << "# comment line\nalpha = 0.5\nepochs = 7\nseed=3\n";
  const auto cfg = load_config(file.string(), {{"alpha", "0.25"}, {"policy_hidden", "32,32"}});
  CHECK(cfg.alpha == 0.25);
  CHECK(cfg.epochs == 7);
  CHECK(cfg.seed == 3);
  CHECK(cfg.delta == 0.001);
  CHECK(cfg.policy_hidden == std::vector<long>{32, 32});
  const auto defaults = load_config("", {});
  CHECK(defaults.to_text() == TrainConfig{}.to_text());

  TrainConfig round;
  apply_config_text(round, cfg.to_text());
  CHECK(round.to_text() == cfg.to_text());

  TrainConfig bad;
  CHECK_THROWS_AS(bad.set("no_such_key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(bad.set("epochs", "many"), std::invalid_argument);
  CHECK_THROWS_AS(bad.set("mode", "sideways"), std::invalid_argument);
  CHECK_THROWS(load_config((dir / "missing.cfg").string(), {}));
}

TEST_CASE("config validation") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.collect_steps == 1000);
  CHECK(cfg.batch_size == 5000);
  CHECK(cfg.replay_length == 50000);
  CHECK(cfg.learning_rate == 2e-4);
  CHECK(cfg.alpha == 0.125);
  CHECK(cfg.limit == 0.025);
  auto c = cfg;
  c.batch_size = 500;  // below S
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = cfg;
  c.replay_length = 4000;  // below B
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = cfg;
  c.alpha = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = cfg;
  c.epochs = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = cfg;
  c.set("mode", "onpolicy-ratios");
  CHECK(c.mode == TrainMode::OnPolicyRatios);
  CHECK(std::string(mode_name(c.mode)) == "onpolicy-ratios");
}

TEST_CASE("zero epochs writes a header-only log and a checkpoint") {
  const auto dir = scratch_dir("zero");
  auto cfg = small_config(dir);
  cfg.epochs = 0;
  const auto res = train(cfg);
  CHECK(res.log.exit_code == 0);
  CHECK(res.log.epochs.empty());
  const auto metrics = slurp(dir / "metrics.csv");
  CHECK(count_lines(metrics) == 1);
  CHECK(metrics == metrics_csv_header() + "\n");
  CHECK(fs::exists(dir / "checkpoint.json"));
  CHECK(fs::exists(dir / "config.txt"));
}

TEST_CASE("training is deterministic and keeps consistent counters") {
  const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
  auto ca = small_config(a), cb = small_config(b);
  const auto ra = train(ca), rb = train(cb);
  REQUIRE(ra.log.exit_code == 0);
  CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
  CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
  CHECK(count_lines(slurp(a / "metrics.csv")) == 1 + static_cast<std::size_t>(ca.epochs));
  CHECK((ra.agent.policy->params() - rb.agent.policy->params()).norm() == 0.0);

  long sum = 0;
  for (const auto& e : ra.log.epochs) {
    sum += e.epoch_cv;
    CHECK(e.cv_total == sum);
    CHECK(e.env_steps == static_cast<long>(e.epoch) * ca.collect_steps);
    CHECK(e.cost_rate == doctest::Approx(double(e.epoch_cv) / ca.collect_steps));
  }
  CHECK(ra.agent.cv_total == sum);
  CHECK(ra.agent.epoch == ca.epochs);
  for (const auto& d : ra.log.diagnostics)
    if (d.update.accepted) CHECK(d.update.measured_kl <= 1.1 * d.update.trust_region.effective());

  for (const char* f : {"score.svg", "cost_rate.svg", "total_cv.svg", "final.json", "checkpoint.json"})
    CHECK(fs::exists(a / f));

  auto cc = small_config(scratch_dir("det_c"));
  cc.seed = 2;
  const auto rc = train(cc);
  CHECK((ra.agent.policy->params() - rc.agent.policy->params()).norm() > 0.0);
}

TEST_CASE("every training mode runs on a tabular environment") {
  for (const char* mode : {"offtrc", "unconstrained", "onpolicy-ratios"}) {
    auto cfg = small_config(scratch_dir(std::string("mode_") + mode), "tabular:3");
    cfg.set("mode", mode);
    TrainOptions opt;
    opt.write_outputs = false;
    const auto res = train(cfg, opt);
    CHECK(res.log.exit_code == 0);
    REQUIRE(res.log.diagnostics.size() == 4);
    if (std::string(mode) == "onpolicy-ratios")
      for (const auto& d : res.log.diagnostics) CHECK(d.update.trust_region.delta_old == 0.0);
    if (std::string(mode) == "offtrc") CHECK(res.log.diagnostics.back().update.trust_region.kl_behavior > 0.0);
  }
}

TEST_CASE("checkpoint round trip") {
  const auto dir = scratch_dir("ckpt");
  auto cfg = small_config(dir);
  cfg.epochs = 2;
  const auto res = train(cfg);
  const auto loaded = load_checkpoint((dir / "final.json").string());
  CHECK(loaded.env_id == "pointnav");
  CHECK(loaded.epoch == 2);
  CHECK(loaded.cv_total == res.agent.cv_total);
  CHECK(loaded.policy->kind() == res.agent.policy->kind());
  CHECK((loaded.policy->params() - res.agent.policy->params()).norm() == 0.0);
  for (auto kind : kAllCritics)
    CHECK((loaded.critics.net(kind).params() - res.agent.critics.net(kind).params()).norm() == 0.0);

  const auto copy_path = dir / "copy.json";
  save_checkpoint(loaded, copy_path.string());
  const auto again = load_checkpoint(copy_path.string());
  CHECK((again.policy->params() - loaded.policy->params()).norm() == 0.0);

  std::ofstream(dir / "broken.json") << "{\"format\": \"something else\"}";
  CHECK_THROWS(load_checkpoint((dir / "broken.json").string()));
  CHECK_THROWS(load_checkpoint((dir / "absent.json").string()));
}

TEST_CASE("evaluation") {
  TrainConfig cfg;
  cfg.policy_hidden = {16};
  cfg.critic_hidden = {16};
  std::mt19937_64 rng(1);
  auto env = make_environment("pointnav");
  const auto agent = make_agent(cfg, *env, rng);

  const auto a = evaluate(agent, "pointnav", 2, 5);
  const auto b = evaluate(agent, "pointnav", 2, 5);
  REQUIRE(a.episodes.size() == 2);
  CHECK(a.mean_score == b.mean_score);
  CHECK(a.mean_discounted_cost == b.mean_discounted_cost);
  CHECK(std::isfinite(a.mean_score));
  for (const auto& e : a.episodes) CHECK(e.length == env->max_episode_steps());
  CHECK(a.mean_discounted_cost > 0.0);

  CHECK_THROWS_AS(evaluate(agent, "tabular:1", 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(agent, "pointnav", 0, 0), std::invalid_argument);

  auto tab = make_environment("tabular:1");
  const auto tagent = make_agent(cfg, *tab, rng);
  CHECK(tagent.policy->kind() == "categorical");
  const auto t = evaluate(tagent, "tabular:1", 3, 9);
  CHECK(t.episodes.size() == 3);
}

TEST_CASE("verification report") {
  VerifyOptions opt;
  opt.instances = 60;
  opt.seed = 4;
  const auto a = run_verification(opt);
  const auto b = run_verification(opt);
  CHECK(a.instances == 60);
  CHECK(a.records.size() == 60 * opt.alphas.size());
  CHECK(a.identity_violations == 0);
  CHECK(a.equality_violations == 0);
  CHECK(a.cost_violations == 0);
  CHECK(a.objective_violations == 0);
  CHECK(a.pinsker_violations == 0);
  CHECK(a.worst_cvar_gap == b.worst_cvar_gap);
  CHECK(a.square_violations == b.square_violations);
  CHECK(verify_summary(a).find("instances") != std::string::npos);
  const auto dir = scratch_dir("verify");
  write_verify_csv(a, (dir / "v.csv").string());
  CHECK(count_lines(slurp(dir / "v.csv")) == 1 + a.records.size());
}

TEST_CASE("sweep") {
  CHECK(sweep_key("batch") == "batch_size");
  CHECK(sweep_key("collect") == "collect_steps");
  CHECK(sweep_key("replay") == "replay_length");
  CHECK_THROWS_AS(sweep_key("delta"), std::invalid_argument);

  const auto dir = scratch_dir("sweep");
  auto base = small_config(dir);
  base.epochs = 1;
  // 100 is below the collect size, so nothing may run.
  CHECK_THROWS_AS(run_sweep(base, "batch", {"400", "100"}), std::invalid_argument);
  CHECK_FALSE(fs::exists(dir / "batch_400"));

  const auto rows = run_sweep(base, "replay", {"1000", "2000"});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].exit_code == 0);
  CHECK(rows[1].env_steps == 200);
  CHECK(fs::exists(dir / "replay_1000" / "metrics.csv"));
  CHECK(count_lines(slurp(dir / "sweep.csv")) == 3);
}

TEST_CASE("line plot") {
  PlotSeries s{"score", {0, 1, 2}, {1.0, 3.0, 2.0}};
  const auto svg = render_line_plot("Score", "steps", "score", {s});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}
