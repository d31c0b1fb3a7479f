#include <jdg/time_grid.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jdg {

TimeGrid TimeGrid::uniform(double horizon, int n_steps,
                           std::vector<double> mandatory) {
  if (!(horizon > 0.0)) throw std::invalid_argument("grid horizon must be positive");
  if (n_steps < 1) throw std::invalid_argument("grid needs at least one step");

  TimeGrid g;
  g.horizon = horizon;
  g.n_steps = n_steps;
  g.nodes.resize(std::size_t(n_steps) + 1);
  for (int i = 0; i <= n_steps; ++i)
    g.nodes[std::size_t(i)] = horizon * double(i) / double(n_steps);
  g.nodes.back() = horizon;

  const double snap = 1e-12 * horizon;
  for (double v : mandatory) {
    if (!(v > 0.0) || v > horizon)
      throw std::invalid_argument("mandatory node outside (0, T]");
    auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), v - snap);
    if (it != g.nodes.end() && std::fabs(*it - v) <= snap) {
      *it = v;  // snap the uniform node onto the exact date
    } else {
      g.nodes.insert(it, v);
    }
  }
  g.mandatory = std::move(mandatory);

  for (std::size_t i = 1; i < g.nodes.size(); ++i)
    if (!(g.nodes[i] > g.nodes[i - 1]))
      throw std::invalid_argument("grid nodes must be strictly increasing");
  if (g.nodes.front() != 0.0 || g.nodes.back() != horizon)
    throw std::invalid_argument("grid must span [0, T]");
  if (g.max_step() > 2.0 * horizon / double(n_steps))
    throw std::invalid_argument("grid step exceeds 2*T/n_steps");
  return g;
}

double TimeGrid::max_step() const {
  double m = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    m = std::max(m, nodes[i] - nodes[i - 1]);
  return m;
}

}  // namespace jdg
