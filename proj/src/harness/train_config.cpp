#include "offtrc/harness/train_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace offtrc {

const char* mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::OffTrc: return "offtrc";
    case TrainMode::Unconstrained: return "unconstrained";
    case TrainMode::OnPolicyRatios: return "onpolicy-ratios";
  }
  return "?";
}

TrainMode parse_mode(const std::string& s) {
  if (s == "offtrc") return TrainMode::OffTrc;
  if (s == "unconstrained") return TrainMode::Unconstrained;
  if (s == "onpolicy-ratios") return TrainMode::OnPolicyRatios;
  throw std::invalid_argument("unknown mode '" + s + "' (offtrc, unconstrained, onpolicy-ratios)");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::invalid_argument("config: bad value '" + v + "' for " + key);
  return out;
}

std::vector<long> parse_list(const std::string& key, const std::string& v) {
  std::vector<long> out;
  if (v == "none") return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<long>(key, trim(item)));
  if (out.empty()) throw std::invalid_argument("config: empty list for " + key + " (use 'none')");
  return out;
}

// Shortest text that parses back to the same double.
std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::vector<long>& v) {
  if (v.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct Field {
  std::function<void(TrainConfig&, const std::string&)> set;
  std::function<std::string(const TrainConfig&)> get;
};

template <typename T>
Field number_field(T TrainConfig::*member, const char* key) {
  return {[member, key](TrainConfig& c, const std::string& v) { c.*member = parse_number<T>(key, v); },
          [member](const TrainConfig& c) {
            if constexpr (std::is_floating_point_v<T>)
              return fmt(c.*member);
            else
              return std::to_string(c.*member);
          }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"env", {[](TrainConfig& c, const std::string& v) { c.env = v; }, [](const TrainConfig& c) { return c.env; }}},
      {"mode",
       {[](TrainConfig& c, const std::string& v) { c.mode = parse_mode(v); },
        [](const TrainConfig& c) { return std::string(mode_name(c.mode)); }}},
      {"epochs", number_field(&TrainConfig::epochs, "epochs")},
      {"collect_steps", number_field(&TrainConfig::collect_steps, "collect_steps")},
      {"batch_size", number_field(&TrainConfig::batch_size, "batch_size")},
      {"replay_length", number_field(&TrainConfig::replay_length, "replay_length")},
      {"delta", number_field(&TrainConfig::delta, "delta")},
      {"alpha", number_field(&TrainConfig::alpha, "alpha")},
      {"limit", number_field(&TrainConfig::limit, "limit")},
      {"gamma", number_field(&TrainConfig::gamma, "gamma")},
      {"trace_decay", number_field(&TrainConfig::trace_decay, "trace_decay")},
      {"learning_rate", number_field(&TrainConfig::learning_rate, "learning_rate")},
      {"policy_hidden",
       {[](TrainConfig& c, const std::string& v) { c.policy_hidden = parse_list("policy_hidden", v); },
        [](const TrainConfig& c) { return fmt(c.policy_hidden); }}},
      {"critic_hidden",
       {[](TrainConfig& c, const std::string& v) { c.critic_hidden = parse_list("critic_hidden", v); },
        [](const TrainConfig& c) { return fmt(c.critic_hidden); }}},
      {"init_log_std", number_field(&TrainConfig::init_log_std, "init_log_std")},
      {"critic_rounds", number_field(&TrainConfig::critic_rounds, "critic_rounds")},
      {"critic_minibatch", number_field(&TrainConfig::critic_minibatch, "critic_minibatch")},
      {"value_scale", number_field(&TrainConfig::value_scale, "value_scale")},
      {"cost_scale", number_field(&TrainConfig::cost_scale, "cost_scale")},
      {"square_scale", number_field(&TrainConfig::square_scale, "square_scale")},
      {"damping", number_field(&TrainConfig::damping, "damping")},
      {"cg_iters", number_field(&TrainConfig::cg_iters, "cg_iters")},
      {"max_backtracks", number_field(&TrainConfig::max_backtracks, "max_backtracks")},
      {"checkpoint_every", number_field(&TrainConfig::checkpoint_every, "checkpoint_every")},
      {"seed", number_field(&TrainConfig::seed, "seed")},
      {"output_dir",
       {[](TrainConfig& c, const std::string& v) { c.output_dir = v; },
        [](const TrainConfig& c) { return c.output_dir; }}},
  };
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& [k, f] : fields())
    if (k == key) return f;
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

void TrainConfig::validate() const {
  const auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (epochs < 0) fail("epochs must be >= 0");
  if (collect_steps <= 0 || batch_size <= 0 || replay_length <= 0) fail("collect_steps, batch_size, replay_length must be positive");
  if (!(collect_steps <= batch_size && batch_size <= replay_length)) fail("need collect_steps <= batch_size <= replay_length");
  if (!(alpha > 0.0) || alpha > 1.0) fail("alpha must lie in (0,1]");
  if (!(gamma > 0.0) || !(gamma < 1.0)) fail("gamma must lie in (0,1)");
  if (!(delta > 0.0)) fail("delta must be positive");
  if (limit < 0.0) fail("limit must be nonnegative");
  if (trace_decay < 0.0 || trace_decay > 1.0) fail("trace_decay must lie in [0,1]");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (critic_rounds < 0 || critic_minibatch < 0 || cg_iters <= 0 || max_backtracks <= 0) fail("iteration counts must be positive");
  if (!(value_scale > 0.0 && cost_scale > 0.0 && square_scale > 0.0)) fail("critic scales must be positive");
  for (long h : policy_hidden)
    if (h <= 0) fail("policy_hidden widths must be positive");
  for (long h : critic_hidden)
    if (h <= 0) fail("critic_hidden widths must be positive");
  if (checkpoint_every <= 0) fail("checkpoint_every must be positive");
}

void TrainConfig::set(const std::string& key, const std::string& value) { field(key).set(*this, trim(value)); }

std::string TrainConfig::get(const std::string& key) const { return field(key).get(*this); }

const std::vector<std::string>& TrainConfig::keys() {
  static const std::vector<std::string> out = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.first);
    return k;
  }();
  return out;
}

std::string TrainConfig::to_text() const {
  std::string out;
  for (const auto& k : keys()) out += k + " = " + get(k) + "\n";
  return out;
}

void apply_config_text(TrainConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(TrainConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str());
}

void apply_overrides(TrainConfig& cfg, const std::vector<std::pair<std::string, std::string>>& overrides) {
  for (const auto& [k, v] : overrides) cfg.set(k, v);
}

TrainConfig load_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
  TrainConfig cfg;
  if (!path.empty()) apply_config_file(cfg, path);
  apply_overrides(cfg, overrides);
  cfg.validate();
  return cfg;
}

}  // namespace offtrc
