#include "marl/model.hpp"

#include <cmath>
#include <numeric>

namespace marl {

namespace {

void check_row(std::span<const double> row, double tol, const std::string& what) {
    double total = 0.0;
    for (double p : row) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw Error(ErrorKind::validation, what + ": negative or non-finite probability");
        total += p;
    }
    if (std::abs(total - 1.0) > tol)
        throw Error(ErrorKind::validation,
                    what + ": row sums to " + std::to_string(total) + " (tolerance " +
                        std::to_string(tol) + ")");
}

} // namespace

void DecPomdpModel::allocate() {
    const size_t S = num_states, JA = num_joint_actions(), JO = num_joint_observations();
    initial_state.assign(S, 0.0);
    transition.assign(S * JA * S, 0.0);
    observation.assign(S * JA * JO, 0.0);
    reward.assign(S * JA * S, 0.0);
    terminal.assign(S, 0);
}

void DecPomdpModel::validate(double tol) const {
    if (num_agents < 1) throw Error(ErrorKind::validation, "model has no agents");
    if (num_states < 1) throw Error(ErrorKind::validation, "model has no states");
    if (static_cast<int>(num_actions.size()) != num_agents ||
        static_cast<int>(num_observations.size()) != num_agents)
        throw Error(ErrorKind::validation, "per-agent action/observation sizes mismatch num_agents");
    for (int n : num_actions)
        if (n < 1) throw Error(ErrorKind::validation, "agent with empty action set");
    for (int n : num_observations)
        if (n < 1) throw Error(ErrorKind::validation, "agent with empty observation set");
    if (!(gamma >= 0.0) || gamma >= 1.0)
        throw Error(ErrorKind::validation, "gamma must lie in [0, 1)");
    if (horizon < 0) throw Error(ErrorKind::validation, "horizon must be >= 0");

    const size_t S = num_states, JA = num_joint_actions(), JO = num_joint_observations();
    if (initial_state.size() != S) throw Error(ErrorKind::validation, "initial_state size mismatch");
    if (transition.size() != S * JA * S) throw Error(ErrorKind::validation, "transition size mismatch");
    if (observation.size() != S * JA * JO) throw Error(ErrorKind::validation, "observation size mismatch");
    if (reward.size() != S * JA * S) throw Error(ErrorKind::validation, "reward table not total over S x A x S");
    if (terminal.size() != S) throw Error(ErrorKind::validation, "terminal flags size mismatch");
    if (!initial_observation.empty() && initial_observation.size() != S * JO)
        throw Error(ErrorKind::validation, "initial_observation size mismatch");

    check_row(initial_state, tol, "initial state distribution");
    bool any_start = false;
    for (size_t s = 0; s < S; ++s)
        if (initial_state[s] > 0 && !terminal[s]) any_start = true;
    if (!any_start) throw Error(ErrorKind::validation, "no non-terminal start state");

    for (size_t s = 0; s < S; ++s) {
        for (size_t ja = 0; ja < JA; ++ja) {
            check_row({&transition[(s * JA + ja) * S], S}, tol,
                      "transition row s=" + std::to_string(s) + " a=" + std::to_string(ja));
            check_row({&observation[(s * JA + ja) * JO], JO}, tol,
                      "observation row s=" + std::to_string(s) + " a=" + std::to_string(ja));
        }
        if (!initial_observation.empty() && initial_state[s] > 0)
            check_row({&initial_observation[s * JO], JO}, tol,
                      "initial observation row s=" + std::to_string(s));
    }
    for (double r : reward)
        if (!std::isfinite(r)) throw Error(ErrorKind::validation, "non-finite reward entry");
}

DecPomdpModel make_model(std::string name, int num_states, std::vector<int> num_actions,
                         std::vector<int> num_observations, double gamma, int horizon) {
    DecPomdpModel m;
    m.name = std::move(name);
    m.num_agents = static_cast<int>(num_actions.size());
    m.num_states = num_states;
    m.num_actions = std::move(num_actions);
    m.num_observations = std::move(num_observations);
    m.gamma = gamma;
    m.horizon = horizon;
    m.allocate();
    return m;
}

} // namespace marl
