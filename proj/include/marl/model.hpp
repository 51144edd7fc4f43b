#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "marl/error.hpp"

namespace marl {

/// Explicit tabular Dec-POMDP: finite states, per-agent action/observation
/// sets, transition and observation tables over joint actions, reward
/// R(s, a, s'), discount, and optional absorbing terminal states. Models with
/// an initial-observation table hand each agent an observation before the
/// first action (the history then starts with an action-less entry).
struct DecPomdpModel {
    std::string name;
    int num_agents = 0;
    int num_states = 0;
    std::vector<int> num_actions;      // per agent
    std::vector<int> num_observations; // per agent

    std::vector<double> initial_state;       // [s]
    std::vector<double> transition;          // [s][ja][s'] row-major
    std::vector<double> observation;         // [s][ja][jo] row-major
    std::vector<double> reward;              // [s][ja][s'] row-major
    std::vector<double> initial_observation; // empty, or [s][jo]
    std::vector<uint8_t> terminal;           // [s]

    double gamma = 0.95;
    int horizon = 0; // 0 = unbounded (episodes end at terminal states)

    int num_joint_actions() const {
        int n = 1;
        for (int a : num_actions) n *= a;
        return n;
    }
    int num_joint_observations() const {
        int n = 1;
        for (int o : num_observations) n *= o;
        return n;
    }

    int joint_action_index(std::span<const int> actions) const {
        int ja = 0;
        for (int i = 0; i < num_agents; ++i) ja = ja * num_actions[i] + actions[i];
        return ja;
    }
    void split_joint_action(int ja, std::span<int> out) const {
        for (int i = num_agents - 1; i >= 0; --i) {
            out[i] = ja % num_actions[i];
            ja /= num_actions[i];
        }
    }
    int joint_observation_index(std::span<const int> obs) const {
        int jo = 0;
        for (int i = 0; i < num_agents; ++i) jo = jo * num_observations[i] + obs[i];
        return jo;
    }
    void split_joint_observation(int jo, std::span<int> out) const {
        for (int i = num_agents - 1; i >= 0; --i) {
            out[i] = jo % num_observations[i];
            jo /= num_observations[i];
        }
    }

    double tr(int s, int ja, int s2) const {
        return transition[(static_cast<size_t>(s) * num_joint_actions() + ja) * num_states + s2];
    }
    double& tr(int s, int ja, int s2) {
        return transition[(static_cast<size_t>(s) * num_joint_actions() + ja) * num_states + s2];
    }
    double ob(int s, int ja, int jo) const {
        return observation[(static_cast<size_t>(s) * num_joint_actions() + ja) * num_joint_observations() + jo];
    }
    double& ob(int s, int ja, int jo) {
        return observation[(static_cast<size_t>(s) * num_joint_actions() + ja) * num_joint_observations() + jo];
    }
    double rew(int s, int ja, int s2) const {
        return reward[(static_cast<size_t>(s) * num_joint_actions() + ja) * num_states + s2];
    }
    double& rew(int s, int ja, int s2) {
        return reward[(static_cast<size_t>(s) * num_joint_actions() + ja) * num_states + s2];
    }
    bool has_initial_observation() const { return !initial_observation.empty(); }
    double init_ob(int s, int jo) const {
        return initial_observation[static_cast<size_t>(s) * num_joint_observations() + jo];
    }
    double& init_ob(int s, int jo) {
        return initial_observation[static_cast<size_t>(s) * num_joint_observations() + jo];
    }
    bool is_terminal(int s) const { return terminal[s] != 0; }

    /// Allocates zeroed tables sized to the declared dimensions.
    void allocate();

    /// Checks shape totality and that every probability row sums to 1 within
    /// `tol` (and is nonnegative). Throws Error(validation) on the first
    /// offending row.
    void validate(double tol = 1e-12) const;
};

/// Convenience constructor for the common dimensions.
DecPomdpModel make_model(std::string name, int num_states, std::vector<int> num_actions,
                         std::vector<int> num_observations, double gamma, int horizon = 0);

} // namespace marl
