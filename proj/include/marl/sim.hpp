#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "marl/history.hpp"
#include "marl/model.hpp"
#include "marl/policy.hpp"
#include "marl/rng.hpp"

namespace marl {

struct StepOutcome {
    int next_state = 0;
    std::vector<int> observations; // per agent
    double reward = 0.0;
};

struct TrajectoryStep {
    int state = 0;
    std::vector<FixedMemoryHistory> histories; // joint history at decision time
    std::vector<int> actions;
    double reward = 0.0;
    int next_state = 0;
    std::vector<int> observations;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    uint64_t seed = 0;
    bool terminated = false; // reached a terminal state (vs. step cap)

    int length() const { return static_cast<int>(steps.size()); }
};

/// Per-agent empty histories (h0).
std::vector<FixedMemoryHistory> initial_histories(const DecPomdpModel& model, int memory_k);

/// Draws the episode start: initial state and per-agent histories, which hold
/// the initial observation when the model defines one.
std::pair<int, std::vector<FixedMemoryHistory>> draw_episode_start(const DecPomdpModel& model,
                                                                   int memory_k, Rng& rng);

/// Samples one environment transition from the model tables.
StepOutcome step(const DecPomdpModel& model, int state, std::span<const int> joint_action, Rng& rng);

/// Runs the interaction loop: sample actions from the policies on the current
/// local histories, step the model, append (action, observation) pairs.
/// Stops at a terminal state, at the model horizon, or at max_steps.
Trajectory rollout(const DecPomdpModel& model, std::span<const SoftmaxPolicy> policies, int memory_k,
                   int max_steps, Rng& rng);

double discounted_return(const Trajectory& trajectory, double gamma);
double undiscounted_return(const Trajectory& trajectory);

} // namespace marl
