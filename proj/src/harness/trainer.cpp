#include "offtrc/harness/trainer.hpp"

#include "offtrc/core/cost.hpp"
#include "offtrc/core/replay_buffer.hpp"
#include "offtrc/harness/plot.hpp"
#include "offtrc/harness/text.hpp"
#include "offtrc/trc/batch.hpp"
#include "offtrc/trc/retrace.hpp"
#include "offtrc/trc/surrogate.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace offtrc {

namespace fs = std::filesystem;

CollectResult Collector::collect(const Policy& policy, long steps) {
  CollectResult out;
  Trajectory current;
  const auto close_segment = [&](bool truncated) {
    if (current.empty()) return;
    current.truncated = truncated;
    out.segments.push_back(std::move(current));
    current = Trajectory{};
  };
  for (long i = 0; i < steps; ++i) {
    if (fresh_) {
      state_ = env_.reset(rng_);
      step_index_ = 0;
      tracker_.reset();
      fresh_ = false;
    }
    const ActionSample a = policy.sample(state_, rng_);
    StepResult r = env_.step(a.action, rng_);
    Transition t;
    t.state = state_;
    t.action = a.action;
    t.behavior_prob = a.prob;
    t.reward = r.reward;
    t.cost = r.cost;
    t.next_state = r.next_state;
    t.terminal = r.terminal;
    t.step_index = step_index_;
    current.transitions.push_back(std::move(t));
    tracker_.add(r.reward, r.cost);
    out.cv += count_cv(r.cost);
    ++out.steps;
    ++step_index_;
    state_ = std::move(r.next_state);
    if (r.terminal || r.truncated) {
      out.episodes.push_back(tracker_.finish());
      close_segment(!r.terminal);
      fresh_ = true;
    }
  }
  close_segment(false);
  return out;
}

UpdateConfig update_config(const TrainConfig& cfg) {
  UpdateConfig u;
  u.delta = cfg.delta;
  u.damping = cfg.damping;
  u.cg_iters = cfg.cg_iters;
  u.max_backtracks = cfg.max_backtracks;
  u.trace_decay = cfg.trace_decay;
  u.constrained = cfg.mode != TrainMode::Unconstrained;
  u.off_policy_correction = cfg.mode != TrainMode::OnPolicyRatios;
  return u;
}

CVaRConfig cvar_config(const TrainConfig& cfg) {
  CVaRConfig c{cfg.alpha, cfg.limit, cfg.gamma};
  c.validate();
  return c;
}

std::string metrics_csv_header() {
  return "epoch,env_steps,reward_sum,cost_rate,cv_count,score,episodes,epoch_cv,cv_total,cv_total_per_episode";
}

std::string metrics_csv_row(const EpochRecord& r) {
  return std::to_string(r.epoch) + "," + std::to_string(r.env_steps) + "," + format_number(r.reward_sum) + "," +
         format_number(r.cost_rate) + "," + format_number(r.cv_count) + "," + format_number(r.score) + "," +
         std::to_string(r.episodes) + "," + std::to_string(r.epoch_cv) + "," + std::to_string(r.cv_total) + "," +
         format_number(r.cv_total_per_episode);
}

std::string diagnostics_csv_header() {
  return "epoch,J_C,J_S,approx_cvar,c_slack,kl_behavior,delta_old,delta_eff,measured_kl,lambda,nu,recovery,accepted,"
         "backtracks,case,variance_floored,loss_value,loss_cost,loss_square";
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
  const auto& u = r.update;
  std::string s = std::to_string(r.epoch);
  for (double v : {u.cost_mean, u.cost_square, u.approx_cvar, u.c_slack, u.trust_region.kl_behavior,
                   u.trust_region.delta_old, u.trust_region.effective(), u.measured_kl, u.lambda, u.nu})
    s += "," + format_number(v);
  s += "," + std::to_string(int(u.recovery)) + "," + std::to_string(int(u.accepted)) + "," +
       std::to_string(u.backtracks) + "," + lqclp_case_name(u.which) + "," + std::to_string(int(u.variance_floored));
  for (double v : r.critics.loss_after) s += "," + format_number(v);
  return s;
}

void write_run_plots(const std::string& dir, const std::vector<EpochRecord>& rows, double limit) {
  PlotSeries score{"score", {}, {}}, rate{"cost rate", {}, {}}, cv{"total CV", {}, {}}, lim{"limit d", {}, {}};
  for (const auto& r : rows) {
    const double x = static_cast<double>(r.env_steps);
    score.x.push_back(x);
    score.y.push_back(r.score);
    rate.x.push_back(x);
    rate.y.push_back(r.cost_rate);
    cv.x.push_back(x);
    cv.y.push_back(static_cast<double>(r.cv_total));
  }
  if (!rows.empty()) {
    lim.x = {rate.x.front(), rate.x.back()};
    lim.y = {limit, limit};
  }
  write_line_plot((fs::path(dir) / "score.svg").string(), "Score", "environment steps", "score", {score});
  write_line_plot((fs::path(dir) / "cost_rate.svg").string(), "Cost rate", "environment steps", "CVs per step",
                  {rate, lim});
  write_line_plot((fs::path(dir) / "total_cv.svg").string(), "Total CV", "environment steps", "constraint violations",
                  {cv});
}

TrainResult train(const TrainConfig& cfg, const TrainOptions& opt) {
  cfg.validate();
  const CVaRConfig cvar = cvar_config(cfg);
  const UpdateConfig ucfg = update_config(cfg);
  const bool off_policy = ucfg.off_policy_correction;

  std::seed_seq seq{cfg.seed, std::uint64_t{0x0ff7c}};
  std::array<std::uint64_t, 4> seeds{};
  seq.generate(seeds.begin(), seeds.end());
  std::mt19937_64 init_rng(seeds[0]), env_rng(seeds[1]), sample_rng(seeds[2]), critic_rng(seeds[3]);

  auto env = make_environment(cfg.env);
  TrainResult result;
  Agent& agent = result.agent;
  agent = make_agent(cfg, *env, init_rng);
  CriticOptimizers optimizers = make_critic_optimizers(cfg.learning_rate);
  const CriticTrainConfig ccfg{cfg.learning_rate, cfg.critic_rounds, cfg.critic_minibatch};
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.replay_length));
  Collector collector(*env, env_rng);

  const fs::path dir(cfg.output_dir);
  const std::string config_text = cfg.to_text();
  std::ofstream metrics, diagnostics;
  if (opt.write_outputs) {
    fs::create_directories(dir);
    std::ofstream(dir / "config.txt") << config_text;
    metrics.open(dir / "metrics.csv");
    diagnostics.open(dir / "diagnostics.csv");
    if (!metrics || !diagnostics) throw std::runtime_error("cannot write logs under " + cfg.output_dir);
    metrics << metrics_csv_header() << "\n";
    diagnostics << diagnostics_csv_header() << "\n";
    save_checkpoint(agent, (dir / "checkpoint.json").string(), config_text);
  }
  Agent last_good = agent;

  const double episode_len = static_cast<double>(env->max_episode_steps());
  EpochRecord carry;
  carry.reward_sum = carry.cv_count = carry.score = std::numeric_limits<double>::quiet_NaN();
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    try {
      CollectResult rollout = collector.collect(*agent.policy, cfg.collect_steps);
      const TransitionBatch rb = flatten(rollout.segments);
      const OnPolicyEstimates J = estimate_onpolicy_J(rb, agent.critics, cfg.gamma);
      buffer.append(rollout.segments);
      const BatchSample sample = buffer.sample(static_cast<std::size_t>(cfg.batch_size), sample_rng);
      const TransitionBatch tb = flatten(sample.segments);

      SurrogateModel model(*agent.policy,
                           make_policy_batch(tb, agent.critics, *agent.policy, cfg.trace_decay, cfg.gamma, off_policy),
                           J, cvar, ucfg.ratio_min, ucfg.ratio_max, ucfg.variance_floor);
      DiagnosticsRecord diag;
      diag.epoch = epoch;
      diag.update = policy_update(*agent.policy, model, ucfg);
      const RetraceTargets targets =
          retrace_targets(tb, agent.critics, *agent.policy, cfg.trace_decay, cfg.gamma, !off_policy);
      diag.critics = update_critics(agent.critics, optimizers, tb.states, targets, ccfg, critic_rng);

      agent.epoch = epoch;
      agent.env_steps += rollout.steps;
      agent.cv_total += rollout.cv;
      EpochRecord row = carry;
      row.epoch = epoch;
      row.env_steps = agent.env_steps;
      row.cost_rate = static_cast<double>(rollout.cv) / static_cast<double>(rollout.steps);
      row.episodes = static_cast<int>(rollout.episodes.size());
      row.epoch_cv = rollout.cv;
      row.cv_total = agent.cv_total;
      row.cv_total_per_episode = static_cast<double>(agent.cv_total) / episode_len;
      if (!rollout.episodes.empty()) {
        double r = 0, c = 0, s = 0;
        for (const auto& e : rollout.episodes) {
          r += e.reward_sum;
          c += static_cast<double>(e.cv_count);
          s += e.score;
        }
        const double n = static_cast<double>(rollout.episodes.size());
        row.reward_sum = r / n;
        row.cv_count = c / n;
        row.score = s / n;
      }
      carry = row;
      result.log.epochs.push_back(row);
      result.log.diagnostics.push_back(diag);
      if (opt.write_outputs) {
        metrics << metrics_csv_row(row) << "\n" << std::flush;
        diagnostics << diagnostics_csv_row(diag) << "\n" << std::flush;
      }
      if (epoch % cfg.checkpoint_every == 0) {
        last_good = agent;
        if (opt.write_outputs) save_checkpoint(agent, (dir / "checkpoint.json").string(), config_text);
      }
      if (opt.progress && epoch % opt.progress_every == 0)
        *opt.progress << "epoch " << epoch << " steps " << agent.env_steps << " score " << format_number(row.score)
                      << " cost_rate " << format_number(row.cost_rate) << " cv_total " << agent.cv_total
                      << " approx_cvar " << format_number(diag.update.approx_cvar) << "\n"
                      << std::flush;
    } catch (const std::runtime_error& e) {
      result.log.exit_code = 3;
      result.log.message = "numerical abort at epoch " + std::to_string(epoch) + ": " + e.what();
      agent = last_good;
      break;
    }
  }
  if (opt.write_outputs) {
    save_checkpoint(agent, (dir / "checkpoint.json").string(), config_text);
    save_checkpoint(agent, (dir / "final.json").string(), config_text);
    write_run_plots(dir.string(), result.log.epochs, cfg.limit);
  }
  return result;
}

}  // namespace offtrc
