#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "marl/history.hpp"
#include "marl/model.hpp"
#include "marl/policy.hpp"
#include "marl/rng.hpp"

namespace marl::exact {

/// Enumerated Markov chain over (joint history, state) pairs under fixed
/// policies, built by breadth-first search from the episode-start
/// distribution. Episodic models are wrapped into a recurrent chain by
/// restarting from the initial distribution whenever a terminal state is
/// entered; histories reset at episode boundaries. Joint histories are stored
/// over the joint (action, observation) alphabet; per-agent local histories
/// are the componentwise projections.
struct ChainSpace {
    const DecPomdpModel* model = nullptr;
    const std::vector<SoftmaxPolicy>* policies = nullptr;
    int memory_k = 0;

    std::vector<FixedMemoryHistory> joint_histories; // id -> history (joint alphabet)
    std::unordered_map<uint64_t, int> joint_history_index;

    // nodes are (joint history id, state) with non-terminal state
    std::vector<std::pair<int, int>> nodes;
    std::unordered_map<int64_t, int> node_index;

    std::vector<std::vector<FixedMemoryHistory>> local_histories; // [agent][local id]
    std::vector<std::unordered_map<uint64_t, int>> local_history_index;
    std::vector<std::vector<int>> local_of_joint; // [agent][joint id] -> local id

    std::vector<double> agent_probs; // [joint id][agent][a] flattened via agent_offsets
    std::vector<int> agent_offsets;  // per-agent start offset within one joint block
    int agent_block = 0;             // sum of action counts

    std::vector<double> joint_action_probs; // [joint id][ja]
    std::vector<int> successor;             // [joint id][ja][jo] -> joint id

    std::vector<std::pair<int, double>> start_nodes; // (node id, probability)

    std::vector<double> expected_reward; // [s][ja]
    std::vector<double> continue_prob;   // [s][ja] mass on non-terminal successors

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_joint() const { return static_cast<int>(joint_histories.size()); }
    double agent_prob(int joint_id, int agent, int a) const {
        return agent_probs[static_cast<size_t>(joint_id) * agent_block + agent_offsets[agent] + a];
    }
    double joint_prob(int joint_id, int ja) const {
        return joint_action_probs[static_cast<size_t>(joint_id) * model->num_joint_actions() + ja];
    }
    int succ(int joint_id, int ja, int jo) const {
        return successor[(static_cast<size_t>(joint_id) * model->num_joint_actions() + ja) *
                             model->num_joint_observations() +
                         jo];
    }
};

ChainSpace build_chain_space(const DecPomdpModel& model, const std::vector<SoftmaxPolicy>& policies,
                             int memory_k, int max_nodes = 2'000'000);

struct SteadyStateOptions {
    int dense_threshold = 2000; // unknowns above this use power iteration
    double power_tol = 1e-14;
    long power_max_iter = 2'000'000;
};

/// Stationary distribution over (joint history, state) with the marginals and
/// conditionals the Bellman operators and variance decompositions consume.
struct SteadyState {
    std::vector<double> node_pr;    // Pr(h, s) per node
    std::vector<double> joint_pr;   // Pr(h) per joint history id
    std::vector<double> state_pr;   // Pr(s)
    std::vector<std::vector<std::pair<int, double>>> state_given_h; // [joint id] -> (s, Pr(s|h))
    std::vector<std::vector<double>> local_pr;                      // [agent][local id]
    // [agent][local id] -> (joint id, Pr(h | h_i)), the teammate-side conditional
    std::vector<std::vector<std::vector<std::pair<int, double>>>> joint_given_local;

    std::string method; // "dense" or "power"
    long iterations = 0;
    double rcond = 0.0;
};

SteadyState steady_state(const ChainSpace& space, const SteadyStateOptions& options = {});

/// Centralized Bellman operator B_c over tables keyed by (joint history,
/// joint action): expected one-step TD target with the stationary state
/// posterior Pr(s|h), bootstrapping 0 past terminal transitions.
class CentralOperator {
public:
    CentralOperator(const ChainSpace& space, const SteadyState& steady);
    std::vector<double> apply(std::span<const double> q) const;
    size_t dimension() const;
    size_t index(int joint_id, int ja) const;

private:
    const ChainSpace& space_;
    const SteadyState& steady_;
};

/// Decentralized Bellman operator B_d for one agent over (local history,
/// local action): teammate histories weighted by the stationary Pr(h_j|h_i),
/// teammate actions by their policies, states by Pr(s|h), and the bootstrap
/// follows the agent's own appended history.
class DecentralOperator {
public:
    DecentralOperator(const ChainSpace& space, const SteadyState& steady, int agent);
    std::vector<double> apply(std::span<const double> q) const;
    size_t dimension() const;
    size_t index(int local_id, int a) const;
    int agent() const { return agent_; }

private:
    const ChainSpace& space_;
    const SteadyState& steady_;
    int agent_;
    std::vector<double> obs_marginal_; // [s][ja][o_i]
};

struct FixedPointResult {
    std::vector<double> q;
    long iterations = 0;
    double residual = 0.0;
};

/// Plain operator iteration until the sup-norm residual drops below tol.
/// Throws Error(numeric) with the recent residual trace when max_iter is
/// exhausted. max_iter <= 0 selects 10 * ceil(log tol / log gamma) + 100.
template <typename Op>
FixedPointResult fixed_point(const Op& op, std::span<const double> q0, double gamma, double tol = 1e-10,
                             long max_iter = 0);

std::vector<double> central_fixed_point(const ChainSpace& space, const SteadyState& steady,
                                        double tol = 1e-10);
std::vector<double> decentral_fixed_point(const ChainSpace& space, const SteadyState& steady, int agent,
                                          double tol = 1e-10);

/// E_{h_j, a_j | h_i}[Q_c(h, a)]: the Lemma-2 characterization of the
/// converged decentralized critic, computed from the centralized table.
std::vector<double> marginalize_central(const ChainSpace& space, const SteadyState& steady, int agent,
                                        std::span<const double> q_central);

enum class CriticMode { centralized, decentralized };

/// Exact mean and per-dimension variance of the single-sample policy-gradient
/// estimator g = grad log pi_i(a_i|h_i) * Q under the stationary (h, a)
/// distribution. In centralized mode Q reads the joint table at the sampled
/// (h_j, a_j); in decentralized mode it reads a per-agent table (pass the
/// Lemma-2 marginal for the paper's converged-critic semantics).
struct GradientMoments {
    std::vector<double> mean;     // [local id * A_i + a]
    std::vector<double> variance; // per dimension
};

GradientMoments gradient_moments(const ChainSpace& space, const SteadyState& steady, int agent,
                                 CriticMode mode, std::span<const double> values);

/// Multi-action variance: Var over teammate actions a_j ~ pi_j of
/// Q_c(h, (a_i, a_j)) with the joint history held fixed.
double mav(const ChainSpace& space, int joint_id, int agent, int action,
           std::span<const double> q_central);

/// Multi-observation variance: Var over h_j ~ Pr(h_j|h_i) of Q_c(h, a) with
/// the full joint action held fixed.
double mov(const ChainSpace& space, const SteadyState& steady, int agent, int local_id, int joint_action,
           std::span<const double> q_central);

struct ContractionReport {
    double worst_ratio = 0.0;
    bool ok = true;
    int violations = 0;
    double worst_excess = 0.0; // max over pairs of ||BQ1-BQ2|| - gamma*||Q1-Q2||
};

template <typename Op>
ContractionReport contraction_check(const Op& op, double gamma, int num_pairs, Rng& rng,
                                    double slack = 1e-10);

} // namespace marl::exact
