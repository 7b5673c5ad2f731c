#ifndef OFFTRC_HARNESS_SWEEP_HPP
#define OFFTRC_HARNESS_SWEEP_HPP

#include "offtrc/harness/train_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace offtrc {

struct SweepRow {
  std::string param;
  std::string value;
  int exit_code = 0;
  long env_steps = 0;
  /// Mean of the last min(20, epochs) epochs.
  double final_score = 0.0;
  double final_cost_rate = 0.0;
  long cv_total = 0;
};

/// Config key behind a sweep axis: batch, collect or replay.
std::string sweep_key(const std::string& param);

/// One training run per value under base.output_dir/<param>_<value>, plus
/// base.output_dir/sweep.csv. Values that break S <= B <= L are rejected
/// before anything runs.
std::vector<SweepRow> run_sweep(const TrainConfig& base, const std::string& param, const std::vector<std::string>& values,
                                std::ostream* progress = nullptr);

}  // namespace offtrc

#endif  // OFFTRC_HARNESS_SWEEP_HPP
