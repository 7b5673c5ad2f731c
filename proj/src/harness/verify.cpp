#include "offtrc/harness/verify.hpp"

#include "offtrc/harness/text.hpp"
#include "offtrc/oracle/bounds.hpp"
#include "offtrc/oracle/random_instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace offtrc {

const char* family_name(TripleFamily f) {
  switch (f) {
    case TripleFamily::Equal: return "equal";
    case TripleFamily::Independent: return "independent";
    case TripleFamily::NearCurrent: return "near-current";
    case TripleFamily::NearBehavior: return "near-behavior";
  }
  return "?";
}

namespace {

using oracle::TabularPolicy;

TabularPolicy<double> blend(const TabularPolicy<double>& a, const TabularPolicy<double>& b, double w) {
  return (1.0 - w) * a + w * b;
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& opt) {
  if (opt.instances <= 0) throw std::invalid_argument("verify: instances must be positive");
  if (opt.alphas.empty()) throw std::invalid_argument("verify: no risk levels");
  VerifyReport rep;
  rep.instances = opt.instances;
  std::mt19937_64 rng(opt.seed);
  const double tol = opt.tolerance;
  for (int i = 0; i < opt.instances; ++i) {
    const auto family = static_cast<TripleFamily>(i % 5 == 0 ? 0 : (i % 5 <= 2 ? 1 : i % 5 - 1));
    const auto m = oracle::random_cmdp<double>(rng);
    const auto ns = m.num_states, na = m.num_actions;
    auto mu = oracle::random_policy<double>(ns, na, rng, 0.01);
    const auto pi = oracle::random_policy<double>(ns, na, rng);
    TabularPolicy<double> cand;
    switch (family) {
      case TripleFamily::Equal: cand = pi; break;
      case TripleFamily::Independent: cand = oracle::random_policy<double>(ns, na, rng); break;
      case TripleFamily::NearCurrent: cand = blend(pi, oracle::random_policy<double>(ns, na, rng), 0.1); break;
      case TripleFamily::NearBehavior:
        cand = oracle::random_policy<double>(ns, na, rng);
        mu = blend(cand, oracle::random_policy<double>(ns, na, rng, 0.01), 0.1);
        break;
    }

    auto t = oracle::analyze_triple(m, mu, pi, cand);
    const auto square = oracle::square_bound_check(t, tol);
    const auto cost = oracle::cost_bound_check(t, tol);
    const auto objective = oracle::objective_bound_check(t, tol);
    const auto pinsker = oracle::pinsker_chain_check(mu, pi, cand, 1e-12);
    const auto same = oracle::surrogate_J(m, mu, pi, pi);
    const double id_c = std::abs(same.cost_mean - t.current.cost_mean);
    const double id_s = std::abs(same.cost_square - t.current.cost_square);
    const double route = std::max(std::abs(t.current.cost_mean - t.current.cost_mean_via_dist),
                                  std::abs(t.current.cost_square - t.current.cost_square_via_dist));

    rep.square_violations += !square.holds;
    rep.cost_violations += !cost.holds;
    rep.objective_violations += !objective.holds;
    rep.pinsker_violations += !pinsker.holds;
    rep.identity_violations += (id_c > tol || id_s > tol || route > tol);
    rep.worst_square_gap = std::min(rep.worst_square_gap, square.gap);

    bool cvar_bad = false, equality_bad = false, skipped = false;
    for (const double alpha : opt.alphas) {
      VerifyRecord r;
      r.instance = i;
      r.family = family;
      r.num_states = ns;
      r.num_actions = na;
      r.gamma = m.gamma;
      r.alpha = alpha;
      try {
        const auto th = oracle::cvar_bound_check(t, alpha, tol);
        r.cvar_lhs = th.lhs;
        r.cvar_rhs = th.rhs;
        r.cvar_gap = th.gap;
        cvar_bad = cvar_bad || !th.holds;
        rep.worst_cvar_gap = std::min(rep.worst_cvar_gap, th.gap);
        if (family == TripleFamily::Equal && std::abs(th.gap) > tol) equality_bad = true;
      } catch (const std::domain_error&) {
        r.cvar_skipped = true;
        skipped = true;
      }
      r.square_gap = square.gap;
      r.cost_gap = cost.gap;
      r.objective_gap = objective.gap;
      r.pinsker_gap = pinsker.gap;
      r.identity_cost = id_c;
      r.identity_square = id_s;
      r.route_error = route;
      rep.records.push_back(r);
    }
    rep.cvar_violations += cvar_bad;
    rep.equality_violations += equality_bad;
    rep.cvar_skipped += skipped;
  }
  return rep;
}

std::string verify_csv_header() {
  return "instance,family,num_states,num_actions,gamma,alpha,cvar_lhs,cvar_rhs,cvar_gap,cvar_skipped,"
         "square_gap,cost_gap,objective_gap,pinsker_gap,identity_cost,identity_square,route_error";
}

std::string verify_csv_row(const VerifyRecord& r) {
  std::string s = std::to_string(r.instance) + "," + family_name(r.family) + "," + std::to_string(r.num_states) + "," +
                  std::to_string(r.num_actions);
  for (double v : {r.gamma, r.alpha, r.cvar_lhs, r.cvar_rhs, r.cvar_gap}) s += "," + format_number(v);
  s += "," + std::to_string(int(r.cvar_skipped));
  for (double v : {r.square_gap, r.cost_gap, r.objective_gap, r.pinsker_gap, r.identity_cost, r.identity_square,
                   r.route_error})
    s += "," + format_number(v);
  return s;
}

void write_verify_csv(const VerifyReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << verify_csv_header() << "\n";
  for (const auto& r : report.records) out << verify_csv_row(r) << "\n";
}

std::string verify_summary(const VerifyReport& rep) {
  std::ostringstream os;
  os << "instances " << rep.instances << "\n"
     << "cost-mean bound violations   " << rep.cost_violations << "\n"
     << "objective bound violations   " << rep.objective_violations << "\n"
     << "cost-square bound violations " << rep.square_violations << " (worst gap " << format_number(rep.worst_square_gap)
     << ")\n"
     << "CVaR bound violations        " << rep.cvar_violations << " (worst gap "
     << format_number(rep.worst_cvar_gap) << ", skipped " << rep.cvar_skipped << ")\n"
     << "equality violations          " << rep.equality_violations << "\n"
     << "Pinsker chain violations     " << rep.pinsker_violations << "\n"
     << "identity violations          " << rep.identity_violations << "\n"
     << (rep.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace offtrc
