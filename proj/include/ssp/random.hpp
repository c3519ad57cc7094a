#pragma once

#include "ssp/mdp_core.hpp"

namespace ssp {

// Uniform draw from the probability simplex with `size` entries.
Vec random_simplex(Rng& rng, int size);

// Random instance with 1..max_states states and 1..max_actions actions per state.
// Every row keeps goal mass >= min_goal, so every policy is proper when min_goal > 0.
SspInstance random_instance(Rng& rng, int max_states, int max_actions, double min_goal = 0.1);

}  // namespace ssp
