// Command-line front end: train, eval, verify, sweep.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 verification failure,
// 3 numerical abort during training.

#include "offtrc/harness/evaluate.hpp"
#include "offtrc/harness/sweep.hpp"
#include "offtrc/harness/text.hpp"
#include "offtrc/harness/trainer.hpp"
#include "offtrc/harness/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

// "--key value" or "--key=value"; dashes inside keys become underscores.
Overrides parse_overrides(const std::vector<std::string>& args) {
  Overrides out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string a = args[i];
    if (a.rfind("--", 0) != 0) throw std::invalid_argument("unexpected argument '" + a + "'");
    a = a.substr(2);
    std::string value;
    if (const auto eq = a.find('='); eq != std::string::npos) {
      value = a.substr(eq + 1);
      a = a.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw std::invalid_argument("missing value for --" + a);
      value = args[++i];
    }
    for (char& c : a)
      if (c == '-') c = '_';
    out.emplace_back(a, value);
  }
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-policy CVaR-constrained trust-region training and exact verification"};
  app.require_subcommand(1);

  std::string config_path;
  auto* train = app.add_subcommand("train", "train a policy; extra --key value pairs override the config file");
  train->add_option("--config", config_path, "key = value config file");
  train->allow_extras();

  std::string checkpoint, env_id;
  int episodes = 10;
  std::uint64_t eval_seed = 0;
  double eval_gamma = 0.99;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--checkpoint", checkpoint, "checkpoint JSON")->required();
  eval->add_option("--env", env_id, "environment id (defaults to the checkpoint's)");
  eval->add_option("--episodes", episodes, "number of episodes")->check(CLI::PositiveNumber);
  eval->add_option("--seed", eval_seed, "evaluation seed");
  eval->add_option("--gamma", eval_gamma, "discount for the reported discounted returns");

  offtrc::VerifyOptions vopt;
  std::string verify_csv = "verify.csv";
  std::string alphas;
  auto* verify = app.add_subcommand("verify", "check the exact bounds on random tabular instances");
  verify->add_option("--instances", vopt.instances, "number of random instances")->check(CLI::PositiveNumber);
  verify->add_option("--seed", vopt.seed, "instance seed");
  verify->add_option("--alphas", alphas, "comma-separated risk levels");
  verify->add_option("--tolerance", vopt.tolerance, "allowed negative gap");
  verify->add_option("--csv", verify_csv, "per-instance output");

  std::string sweep_param, sweep_values, sweep_config;
  auto* sweep = app.add_subcommand("sweep", "one training run per value of batch, collect or replay");
  sweep->add_option("--param", sweep_param, "batch | collect | replay")
      ->required()
      ->check(CLI::IsMember({"batch", "collect", "replay"}));
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();
  sweep->add_option("--config", sweep_config, "base config file");
  sweep->allow_extras();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const auto cfg = offtrc::load_config(config_path, parse_overrides(train->remaining()));
      const auto res = offtrc::train(cfg, {true, &std::cout, 10});
      if (res.log.exit_code != 0) std::cerr << res.log.message << "\n";
      std::cout << "run directory " << cfg.output_dir << "\n";
      return res.log.exit_code;
    }
    if (*eval) {
      const auto agent = offtrc::load_checkpoint(checkpoint);
      const auto rep = offtrc::evaluate(agent, env_id.empty() ? agent.env_id : env_id, episodes, eval_seed, eval_gamma);
      using offtrc::format_number;
      std::cout << "episodes " << rep.episodes.size() << "\n"
                << "reward_sum " << format_number(rep.mean_reward_sum) << " +- " << format_number(rep.std_reward_sum)
                << "\n"
                << "cv_count " << format_number(rep.mean_cv) << " +- " << format_number(rep.std_cv) << "\n"
                << "score " << format_number(rep.mean_score) << " +- " << format_number(rep.std_score) << "\n"
                << "discounted_reward " << format_number(rep.mean_discounted_reward) << "\n"
                << "discounted_cost " << format_number(rep.mean_discounted_cost) << "\n";
      return 0;
    }
    if (*verify) {
      if (!alphas.empty()) {
        vopt.alphas.clear();
        for (const auto& a : split(alphas)) vopt.alphas.push_back(std::stod(a));
      }
      const auto rep = offtrc::run_verification(vopt);
      offtrc::write_verify_csv(rep, verify_csv);
      std::cout << offtrc::verify_summary(rep);
      return rep.passed() ? 0 : 2;
    }
    if (*sweep) {
      const auto base = offtrc::load_config(sweep_config, parse_overrides(sweep->remaining()));
      const auto rows = offtrc::run_sweep(base, sweep_param, split(sweep_values), &std::cout);
      int code = 0;
      for (const auto& r : rows) {
        std::cout << r.param << "=" << r.value << " score " << offtrc::format_number(r.final_score) << " cost_rate "
                  << offtrc::format_number(r.final_cost_rate) << " cv_total " << r.cv_total << "\n";
        if (r.exit_code != 0) code = r.exit_code;
      }
      return code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
