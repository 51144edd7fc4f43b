#include "marl/sim.hpp"

namespace marl {

std::vector<FixedMemoryHistory> initial_histories(const DecPomdpModel& model, int memory_k) {
    return std::vector<FixedMemoryHistory>(model.num_agents, FixedMemoryHistory::initial(memory_k));
}

std::pair<int, std::vector<FixedMemoryHistory>> draw_episode_start(const DecPomdpModel& model,
                                                                   int memory_k, Rng& rng) {
    int s = rng.categorical(model.initial_state);
    auto histories = initial_histories(model, memory_k);
    if (model.has_initial_observation()) {
        const size_t JO = model.num_joint_observations();
        int jo = rng.categorical({&model.initial_observation[s * JO], JO});
        std::vector<int> obs(model.num_agents);
        model.split_joint_observation(jo, obs);
        for (int i = 0; i < model.num_agents; ++i)
            histories[i] = histories[i].append(-1, obs[i]);
    }
    return {s, std::move(histories)};
}

StepOutcome step(const DecPomdpModel& model, int state, std::span<const int> joint_action, Rng& rng) {
    const size_t S = model.num_states;
    const size_t JA = model.num_joint_actions();
    const size_t JO = model.num_joint_observations();
    if (state < 0 || state >= model.num_states)
        throw Error(ErrorKind::invalid_argument, "step: state out of range");
    for (int i = 0; i < model.num_agents; ++i)
        if (joint_action[i] < 0 || joint_action[i] >= model.num_actions[i])
            throw Error(ErrorKind::contract, "step: action out of range for agent " + std::to_string(i));

    const int ja = model.joint_action_index(joint_action);
    StepOutcome out;
    out.next_state = rng.categorical({&model.transition[(state * JA + ja) * S], S});
    int jo = rng.categorical({&model.observation[(state * JA + ja) * JO], JO});
    out.observations.resize(model.num_agents);
    model.split_joint_observation(jo, out.observations);
    out.reward = model.rew(state, ja, out.next_state);
    return out;
}

Trajectory rollout(const DecPomdpModel& model, std::span<const SoftmaxPolicy> policies, int memory_k,
                   int max_steps, Rng& rng) {
    if (static_cast<int>(policies.size()) != model.num_agents)
        throw Error(ErrorKind::invalid_argument, "rollout: one policy per agent required");

    Trajectory traj;
    auto [state, histories] = draw_episode_start(model, memory_k, rng);
    int cap = max_steps;
    if (model.horizon > 0) cap = std::min(cap, model.horizon);

    std::vector<int> actions(model.num_agents);
    for (int t = 0; t < cap; ++t) {
        if (model.is_terminal(state)) {
            traj.terminated = true;
            break;
        }
        for (int i = 0; i < model.num_agents; ++i) {
            uint64_t key = histories[i].key(model.num_actions[i], model.num_observations[i]);
            actions[i] = policies[i].sample(key, rng);
            if (actions[i] < 0 || actions[i] >= model.num_actions[i])
                throw Error(ErrorKind::contract, "rollout: policy produced out-of-range action");
        }
        StepOutcome o = step(model, state, actions, rng);
        TrajectoryStep ts;
        ts.state = state;
        ts.histories = histories;
        ts.actions = actions;
        ts.reward = o.reward;
        ts.next_state = o.next_state;
        ts.observations = o.observations;
        traj.steps.push_back(std::move(ts));

        for (int i = 0; i < model.num_agents; ++i)
            histories[i] = histories[i].append(actions[i], o.observations[i]);
        state = o.next_state;
    }
    if (!traj.terminated && cap > 0 && model.is_terminal(state)) traj.terminated = true;
    return traj;
}

double discounted_return(const Trajectory& trajectory, double gamma) {
    double g = 0.0;
    double w = 1.0; // first reward is undiscounted
    for (const auto& s : trajectory.steps) {
        g += w * s.reward;
        w *= gamma;
    }
    return g;
}

double undiscounted_return(const Trajectory& trajectory) {
    double g = 0.0;
    for (const auto& s : trajectory.steps) g += s.reward;
    return g;
}

} // namespace marl
