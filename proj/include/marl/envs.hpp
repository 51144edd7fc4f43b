#pragma once

#include <cstdint>
#include <vector>

#include "marl/model.hpp"

namespace marl {

/// One-shot cooperative matrix game as a 2-state Dec-POMDP (start + absorbing
/// done). `payoff[row][col]` is read with row = agent-2 action and col =
/// agent-1 action, exactly as the paper prints its tables.
DecPomdpModel build_matrix_game(const std::string& name,
                                const std::vector<std::vector<double>>& payoff_by_a2_a1,
                                double gamma = 0.95);

/// Climb Game payoffs [[11,-30,0],[-30,7,6],[0,0,5]].
DecPomdpModel build_climb_game();

/// Morning Game payoffs [[1,0],[0,3]]; agent 1 {pickles, cereal}, agent 2
/// {vodka, milk}.
DecPomdpModel build_morning_game();

/// One-step guessing game: state (s1, s2) uniform on 2x2, each agent observes
/// its own component before acting. Actions a1/a2 guess the teammate's
/// observation index; scoring is (r_match/2) * (matches - mismatches), so two
/// matches pay +r_match, one of each 0, two mismatches -r_match. (a3, a3) pays
/// safe_reward regardless of state.
DecPomdpModel build_guess_game(double r_match = 10.0, double safe_reward = 5.0);

/// One-step binary matching game: each agent privately observes a bit and is
/// individually rewarded +r when its action equals the teammate's bit, -r
/// otherwise; the team reward is the sum.
DecPomdpModel build_binary_match_game(double r = 10.0);

/// Canonical two-agent Dec-Tiger: 2 hidden states, actions {open-left,
/// open-right, listen}, hearing accuracy 0.85 while both listen. Opening any
/// door ends the episode: +20 both correct, -50 both wrong, -100 split doors,
/// +9 / -101 when one agent listens while the other opens.
DecPomdpModel build_dectiger(double gamma = 0.9);

/// Options for the random small Dec-POMDP battery.
struct RandomModelOptions {
    bool one_step = false;  // reward game with initial observations, 1-step episodes
    bool episodic = false;  // multi-step with an absorbing terminal (ignored when one_step)
    int num_states = 3;
    int num_actions = 2;      // per agent
    int num_observations = 2; // per agent
    double gamma = 0.9;
};

/// Seeded random 2-agent Dec-POMDP with full-support Dirichlet(1) rows and
/// rewards uniform on [-1, 1].
DecPomdpModel build_random_model(uint64_t seed, const RandomModelOptions& opts = {});

} // namespace marl
