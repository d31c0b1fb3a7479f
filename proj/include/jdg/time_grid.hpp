#pragma once

#include <vector>

namespace jdg {

// Integration grid on [0, T]. Mandatory nodes (observation dates, weight
// split points) are inserted exactly; jump times are added per path later.
struct TimeGrid {
  double horizon = 0.0;
  int n_steps = 0;
  std::vector<double> nodes;      // t_0 = 0 < ... < t_n = T
  std::vector<double> mandatory;  // subset of nodes, in insertion order

  static TimeGrid uniform(double horizon, int n_steps,
                          std::vector<double> mandatory = {});

  int intervals() const { return int(nodes.size()) - 1; }
  double max_step() const;
};

}  // namespace jdg
