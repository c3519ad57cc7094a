#include "ssp/random.hpp"

#include <cmath>

namespace ssp {

Vec random_simplex(Rng& rng, int size) {
  Vec v(size);
  double total = 0.0;
  for (double& e : v) {
    e = -std::log(1.0 - uniform01(rng));
    total += e;
  }
  for (double& e : v) e /= total;
  return v;
}

SspInstance random_instance(Rng& rng, int max_states, int max_actions, double min_goal) {
  const int n = 1 + static_cast<int>(uniform01(rng) * max_states) % max_states;
  SaTable cost(n);
  Tensor trans(n);
  for (int s = 0; s < n; ++s) {
    const int a = 1 + static_cast<int>(uniform01(rng) * max_actions) % max_actions;
    for (int k = 0; k < a; ++k) {
      cost[s].push_back(0.1 + 0.9 * uniform01(rng));
      const Vec full = random_simplex(rng, n + 1);
      Vec row(full.begin(), full.begin() + n);
      for (double& e : row) e *= 1.0 - min_goal;
      trans[s].push_back(row);
    }
  }
  return make_instance(cost, trans);
}

}  // namespace ssp
