#ifndef OFFTRC_HARNESS_TRAINER_HPP
#define OFFTRC_HARNESS_TRAINER_HPP

#include "offtrc/core/env.hpp"
#include "offtrc/core/metrics.hpp"
#include "offtrc/core/transition.hpp"
#include "offtrc/harness/agent.hpp"
#include "offtrc/harness/train_config.hpp"
#include "offtrc/trc/critic_update.hpp"
#include "offtrc/trc/policy_update.hpp"

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace offtrc {

struct CollectResult {
  std::vector<Trajectory> segments;
  std::vector<EpisodeMetrics> episodes;
  long steps = 0;
  long cv = 0;
};

/// Steps one environment with a policy, carrying the episode across calls.
class Collector {
 public:
  Collector(Environment& env, std::mt19937_64& rng) : env_(env), rng_(rng) {}

  /// Exactly `steps` transitions. Segments end at terminals, at the episode
  /// step limit (truncated) and at the end of the call.
  CollectResult collect(const Policy& policy, long steps);

 private:
  Environment& env_;
  std::mt19937_64& rng_;
  Eigen::VectorXd state_;
  std::size_t step_index_ = 0;
  bool fresh_ = true;
  EpisodeTracker tracker_;
};

/// One row of metrics.csv. Episode columns average the episodes that ended in
/// this epoch and carry the previous value when none did.
struct EpochRecord {
  int epoch = 0;
  long env_steps = 0;
  double reward_sum = 0.0;
  /// CVs per environment step over this epoch's collection.
  double cost_rate = 0.0;
  double cv_count = 0.0;
  double score = 0.0;
  int episodes = 0;
  long epoch_cv = 0;
  long cv_total = 0;
  /// cv_total divided by the episode length.
  double cv_total_per_episode = 0.0;
};

struct DiagnosticsRecord {
  int epoch = 0;
  UpdateDiagnostics update;
  CriticUpdateReport critics;
};

struct RunLog {
  std::vector<EpochRecord> epochs;
  std::vector<DiagnosticsRecord> diagnostics;
  int exit_code = 0;
  std::string message;
};

struct TrainResult {
  RunLog log;
  Agent agent;
};

struct TrainOptions {
  /// Write config snapshot, CSVs, plots and checkpoints to cfg.output_dir.
  bool write_outputs = true;
  /// Progress lines every `progress_every` epochs; null for silence.
  std::ostream* progress = nullptr;
  int progress_every = 10;
};

UpdateConfig update_config(const TrainConfig& cfg);
CVaRConfig cvar_config(const TrainConfig& cfg);

/// Collect, estimate J_C/J_S, store, sample, policy step, retrace targets,
/// critic regression; once per epoch. Deterministic for a given config. A
/// numerical failure restores the last checkpoint and sets exit_code 3.
TrainResult train(const TrainConfig& cfg, const TrainOptions& opt = {});

std::string metrics_csv_header();
std::string metrics_csv_row(const EpochRecord& r);
std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

/// score, cost rate and cumulative CV against environment steps.
void write_run_plots(const std::string& dir, const std::vector<EpochRecord>& rows, double limit);

}  // namespace offtrc

#endif  // OFFTRC_HARNESS_TRAINER_HPP
