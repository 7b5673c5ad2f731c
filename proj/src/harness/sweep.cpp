#include "offtrc/harness/sweep.hpp"

#include "offtrc/harness/text.hpp"
#include "offtrc/harness/trainer.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace offtrc {

std::string sweep_key(const std::string& param) {
  if (param == "batch") return "batch_size";
  if (param == "collect") return "collect_steps";
  if (param == "replay") return "replay_length";
  throw std::invalid_argument("sweep: unknown parameter '" + param + "' (batch, collect, replay)");
}

std::vector<SweepRow> run_sweep(const TrainConfig& base, const std::string& param, const std::vector<std::string>& values,
                                std::ostream* progress) {
  const std::string key = sweep_key(param);
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  std::vector<TrainConfig> configs;
  for (const auto& v : values) {
    TrainConfig c = base;
    c.set(key, v);
    c.output_dir = (std::filesystem::path(base.output_dir) / (param + "_" + v)).string();
    c.validate();
    configs.push_back(c);
  }
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (progress) *progress << "sweep " << param << "=" << values[i] << "\n" << std::flush;
    const TrainResult res = train(configs[i], {true, progress, 50});
    SweepRow row;
    row.param = param;
    row.value = values[i];
    row.exit_code = res.log.exit_code;
    const auto& ep = res.log.epochs;
    if (!ep.empty()) {
      const std::size_t n = std::min<std::size_t>(20, ep.size());
      double s = 0, c = 0;
      for (std::size_t k = ep.size() - n; k < ep.size(); ++k) {
        s += ep[k].score;
        c += ep[k].cost_rate;
      }
      row.final_score = s / static_cast<double>(n);
      row.final_cost_rate = c / static_cast<double>(n);
      row.env_steps = ep.back().env_steps;
      row.cv_total = ep.back().cv_total;
    }
    rows.push_back(row);
  }
  std::filesystem::create_directories(base.output_dir);
  std::ofstream out(std::filesystem::path(base.output_dir) / "sweep.csv");
  out << "param,value,exit_code,env_steps,final_score,final_cost_rate,cv_total\n";
  for (const auto& r : rows)
    out << r.param << "," << r.value << "," << r.exit_code << "," << r.env_steps << "," << format_number(r.final_score)
        << "," << format_number(r.final_cost_rate) << "," << r.cv_total << "\n";
  return rows;
}

}  // namespace offtrc
