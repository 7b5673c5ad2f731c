#ifndef OFFTRC_HARNESS_VERIFY_HPP
#define OFFTRC_HARNESS_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace offtrc {

struct VerifyOptions {
  int instances = 500;
  std::uint64_t seed = 0;
  std::vector<double> alphas{0.125, 0.25, 0.5, 1.0};
  double tolerance = 1e-9;
};

/// How (mu, pi, pi') were drawn for an instance.
enum class TripleFamily { Equal, Independent, NearCurrent, NearBehavior };
const char* family_name(TripleFamily f);

/// One (instance, alpha) pair. Gaps are rhs - lhs, so negative means violated.
struct VerifyRecord {
  int instance = 0;
  TripleFamily family = TripleFamily::Independent;
  long num_states = 0, num_actions = 0;
  double gamma = 0.0, alpha = 0.0;
  double cvar_lhs = 0.0, cvar_rhs = 0.0, cvar_gap = 0.0;
  bool cvar_skipped = false;  // approximated CVaR not positive
  double square_gap = 0.0;
  double cost_gap = 0.0;
  double objective_gap = 0.0;
  double pinsker_gap = 0.0;
  /// |J^{mu,pi}(pi) - J(pi)| for the cost mean and the cost square.
  double identity_cost = 0.0, identity_square = 0.0;
  /// Largest disagreement between the value route and the occupancy route.
  double route_error = 0.0;
};

struct VerifyReport {
  std::vector<VerifyRecord> records;
  int instances = 0;
  int cvar_violations = 0;  // instances with a violation at any alpha
  int cvar_skipped = 0;
  int square_violations = 0;
  int cost_violations = 0;
  int objective_violations = 0;
  int pinsker_violations = 0;
  int identity_violations = 0;
  /// pi = pi' instances whose CVaR bound gap is not zero within tolerance.
  int equality_violations = 0;
  double worst_cvar_gap = 0.0;
  double worst_square_gap = 0.0;

  bool passed() const {
    return cvar_violations == 0 && square_violations == 0 && cost_violations == 0 && objective_violations == 0 &&
           pinsker_violations == 0 && identity_violations == 0 && equality_violations == 0;
  }
};

/// Random tabular instances checked against every bound and identity of the
/// exact oracle. Deterministic in the seed.
VerifyReport run_verification(const VerifyOptions& opt);

std::string verify_csv_header();
std::string verify_csv_row(const VerifyRecord& r);
void write_verify_csv(const VerifyReport& report, const std::string& path);
std::string verify_summary(const VerifyReport& report);

}  // namespace offtrc

#endif  // OFFTRC_HARNESS_VERIFY_HPP
