#include "offtrc/core/transition.hpp"

namespace offtrc {

CostReturn cost_return(const Trajectory& traj, double gamma) {
  CostReturn out;
  if (traj.empty()) {
    out.empty = true;
    return out;
  }
  double discount = 1.0;
  for (const auto& t : traj.transitions) {
    out.value += discount * t.cost;
    discount *= gamma;
  }
  out.needs_bootstrap = !traj.ends_terminal();
  return out;
}

}  // namespace offtrc
