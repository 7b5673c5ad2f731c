#ifndef OFFTRC_HARNESS_TRAIN_CONFIG_HPP
#define OFFTRC_HARNESS_TRAIN_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace offtrc {

/// Which update the trainer runs.
enum class TrainMode {
  /// Off-policy surrogates, retrace, delta_old, CVaR constraint.
  OffTrc,
  /// Same data path, no cost constraint.
  Unconstrained,
  /// Off-policy batches treated as on-policy: ratios pi/pi_old, no retrace
  /// truncation, delta_old = 0.
  OnPolicyRatios,
};

const char* mode_name(TrainMode m);
TrainMode parse_mode(const std::string& s);

struct TrainConfig {
  std::string env = "pointnav";
  TrainMode mode = TrainMode::OffTrc;
  int epochs = 300;                 // P
  int collect_steps = 1000;         // S
  int batch_size = 5000;            // B
  int replay_length = 50000;        // L
  double delta = 0.001;
  double alpha = 0.125;
  double limit = 0.025;             // d
  double gamma = 0.99;
  double trace_decay = 0.97;        // lambda
  double learning_rate = 2e-4;      // critics
  std::vector<long> policy_hidden{64, 64};
  std::vector<long> critic_hidden{64, 64};
  double init_log_std = -0.5;
  int critic_rounds = 20;
  int critic_minibatch = 500;
  double value_scale = 10.0;
  double cost_scale = 5.0;
  double square_scale = 25.0;
  double damping = 0.01;
  int cg_iters = 10;
  int max_backtracks = 10;
  int checkpoint_every = 10;
  std::uint64_t seed = 1;
  std::string output_dir = "runs/default";

  /// Throws std::invalid_argument when an invariant fails
  /// (S <= B <= L, positive sizes, alpha in (0,1], ...).
  void validate() const;

  /// Sets one field from its textual key and value. Throws on unknown keys or
  /// unparsable values.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static const std::vector<std::string>& keys();

  /// key = value lines, in a fixed key order.
  std::string to_text() const;
};

/// Parses "key = value" lines ('#' starts a comment) into `cfg`.
void apply_config_text(TrainConfig& cfg, const std::string& text);
void apply_config_file(TrainConfig& cfg, const std::string& path);
/// Later entries win.
void apply_overrides(TrainConfig& cfg, const std::vector<std::pair<std::string, std::string>>& overrides);

/// Defaults, then the file (if any), then the overrides.
TrainConfig load_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace offtrc

#endif  // OFFTRC_HARNESS_TRAIN_CONFIG_HPP
