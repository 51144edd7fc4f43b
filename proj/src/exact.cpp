#include "marl/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/Dense>

namespace marl::exact {

namespace {

FixedMemoryHistory project_local(const FixedMemoryHistory& joint, const DecPomdpModel& m, int agent) {
    FixedMemoryHistory h(joint.memory());
    std::vector<int> acts(m.num_agents), obs(m.num_agents);
    for (const auto& e : joint.entries()) {
        int a = -1;
        if (e.action >= 0) {
            m.split_joint_action(e.action, acts);
            a = acts[agent];
        }
        m.split_joint_observation(e.observation, obs);
        h = h.append(a, obs[agent]);
    }
    return h;
}

} // namespace

ChainSpace build_chain_space(const DecPomdpModel& model, const std::vector<SoftmaxPolicy>& policies,
                             int memory_k, int max_nodes) {
    model.validate();
    if (static_cast<int>(policies.size()) != model.num_agents)
        throw Error(ErrorKind::invalid_argument, "one policy per agent required");
    if (memory_k > FixedMemoryHistory::key_capacity(model.num_joint_actions(),
                                                    model.num_joint_observations()))
        throw Error(ErrorKind::unsupported, "memory window too deep for exact history keys");

    ChainSpace sp;
    sp.model = &model;
    sp.policies = &policies;
    sp.memory_k = memory_k;

    const int S = model.num_states;
    const int JA = model.num_joint_actions();
    const int JO = model.num_joint_observations();

    sp.agent_offsets.resize(model.num_agents);
    sp.agent_block = 0;
    for (int i = 0; i < model.num_agents; ++i) {
        sp.agent_offsets[i] = sp.agent_block;
        sp.agent_block += model.num_actions[i];
    }

    sp.local_histories.resize(model.num_agents);
    sp.local_history_index.resize(model.num_agents);
    sp.local_of_joint.resize(model.num_agents);

    std::vector<int> acts(model.num_agents);
    auto intern_joint = [&](const FixedMemoryHistory& h) -> int {
        const uint64_t key = h.key(JA, JO);
        auto it = sp.joint_history_index.find(key);
        if (it != sp.joint_history_index.end()) return it->second;
        const int id = static_cast<int>(sp.joint_histories.size());
        sp.joint_history_index.emplace(key, id);
        sp.joint_histories.push_back(h);
        sp.agent_probs.resize(sp.joint_histories.size() * sp.agent_block, 0.0);
        for (int i = 0; i < model.num_agents; ++i) {
            FixedMemoryHistory local = project_local(h, model, i);
            const uint64_t lkey = local.key(model.num_actions[i], model.num_observations[i]);
            auto lit = sp.local_history_index[i].find(lkey);
            int lid;
            if (lit == sp.local_history_index[i].end()) {
                lid = static_cast<int>(sp.local_histories[i].size());
                sp.local_history_index[i].emplace(lkey, lid);
                sp.local_histories[i].push_back(local);
            } else {
                lid = lit->second;
            }
            sp.local_of_joint[i].push_back(lid);
            policies[i].probabilities_into(
                lkey, {&sp.agent_probs[static_cast<size_t>(id) * sp.agent_block + sp.agent_offsets[i]],
                       static_cast<size_t>(model.num_actions[i])});
        }
        sp.joint_action_probs.resize(sp.joint_histories.size() * JA, 0.0);
        for (int ja = 0; ja < JA; ++ja) {
            model.split_joint_action(ja, acts);
            double p = 1.0;
            for (int i = 0; i < model.num_agents; ++i) p *= sp.agent_prob(id, i, acts[i]);
            sp.joint_action_probs[static_cast<size_t>(id) * JA + ja] = p;
        }
        sp.successor.resize(sp.joint_histories.size() * JA * JO, -1);
        return id;
    };

    auto node_id = [&](int joint_id, int s) -> int {
        const int64_t key = static_cast<int64_t>(joint_id) * S + s;
        auto it = sp.node_index.find(key);
        if (it != sp.node_index.end()) return it->second;
        const int id = static_cast<int>(sp.nodes.size());
        sp.node_index.emplace(key, id);
        sp.nodes.emplace_back(joint_id, s);
        return id;
    };

    // episode-start distribution, conditioned on non-terminal start states
    double start_mass = 0.0;
    for (int s = 0; s < S; ++s)
        if (!model.is_terminal(s)) start_mass += model.initial_state[s];
    for (int s = 0; s < S; ++s) {
        if (model.is_terminal(s) || model.initial_state[s] <= 0.0) continue;
        const double ps = model.initial_state[s] / start_mass;
        if (model.has_initial_observation()) {
            for (int jo = 0; jo < JO; ++jo) {
                const double po = model.init_ob(s, jo);
                if (po <= 0.0) continue;
                FixedMemoryHistory h = FixedMemoryHistory::initial(memory_k).append(-1, jo);
                sp.start_nodes.emplace_back(node_id(intern_joint(h), s), ps * po);
            }
        } else {
            sp.start_nodes.emplace_back(node_id(intern_joint(FixedMemoryHistory::initial(memory_k)), s),
                                        ps);
        }
    }

    sp.expected_reward.assign(static_cast<size_t>(S) * JA, 0.0);
    sp.continue_prob.assign(static_cast<size_t>(S) * JA, 0.0);
    for (int s = 0; s < S; ++s) {
        for (int ja = 0; ja < JA; ++ja) {
            double rexp = 0.0, cont = 0.0;
            for (int s2 = 0; s2 < S; ++s2) {
                const double pt = model.tr(s, ja, s2);
                if (pt <= 0.0) continue;
                rexp += pt * model.rew(s, ja, s2);
                if (!model.is_terminal(s2)) cont += pt;
            }
            sp.expected_reward[static_cast<size_t>(s) * JA + ja] = rexp;
            sp.continue_prob[static_cast<size_t>(s) * JA + ja] = cont;
        }
    }

    std::deque<int> frontier;
    std::vector<uint8_t> expanded;
    for (auto& [nid, p] : sp.start_nodes) frontier.push_back(nid);
    while (!frontier.empty()) {
        const int nid = frontier.front();
        frontier.pop_front();
        if (nid >= static_cast<int>(expanded.size())) expanded.resize(sp.num_nodes(), 0);
        if (expanded[nid]) continue;
        expanded[nid] = 1;

        const auto [jid, s] = sp.nodes[nid];
        for (int ja = 0; ja < JA; ++ja) {
            if (sp.joint_prob(jid, ja) <= 0.0) continue;
            for (int jo = 0; jo < JO; ++jo) {
                if (model.ob(s, ja, jo) <= 0.0) continue;
                const int jid2 = intern_joint(sp.joint_histories[jid].append(ja, jo));
                sp.successor[(static_cast<size_t>(jid) * JA + ja) * JO + jo] = jid2;
                for (int s2 = 0; s2 < S; ++s2) {
                    if (model.tr(s, ja, s2) <= 0.0 || model.is_terminal(s2)) continue;
                    const int nid2 = node_id(jid2, s2);
                    if (nid2 >= static_cast<int>(expanded.size()) || !expanded[nid2])
                        frontier.push_back(nid2);
                }
            }
        }
        if (sp.num_nodes() > max_nodes)
            throw Error(ErrorKind::unsupported,
                        "exact chain exceeds " + std::to_string(max_nodes) + " nodes");
    }
    return sp;
}

namespace {

/// Row-sparse restart-wrapped transition kernel over chain nodes.
std::vector<std::vector<std::pair<int, double>>> build_kernel(const ChainSpace& sp) {
    const DecPomdpModel& m = *sp.model;
    const int S = m.num_states;
    const int JA = m.num_joint_actions();
    const int JO = m.num_joint_observations();
    std::vector<std::vector<std::pair<int, double>>> rows(sp.num_nodes());
    for (int nid = 0; nid < sp.num_nodes(); ++nid) {
        const auto [jid, s] = sp.nodes[nid];
        std::unordered_map<int, double> acc;
        for (int ja = 0; ja < JA; ++ja) {
            const double pa = sp.joint_prob(jid, ja);
            if (pa <= 0.0) continue;
            double term_mass = 0.0;
            for (int s2 = 0; s2 < S; ++s2) {
                const double pt = m.tr(s, ja, s2);
                if (pt > 0.0 && m.is_terminal(s2)) term_mass += pt;
            }
            for (int jo = 0; jo < JO; ++jo) {
                const double po = m.ob(s, ja, jo);
                if (po <= 0.0) continue;
                const int jid2 = sp.succ(jid, ja, jo);
                for (int s2 = 0; s2 < S; ++s2) {
                    const double pt = m.tr(s, ja, s2);
                    if (pt <= 0.0 || m.is_terminal(s2)) continue;
                    acc[sp.node_index.at(static_cast<int64_t>(jid2) * S + s2)] += pa * po * pt;
                }
            }
            if (term_mass > 0.0)
                for (const auto& [snid, spr] : sp.start_nodes) acc[snid] += pa * term_mass * spr;
        }
        rows[nid].assign(acc.begin(), acc.end());
        std::sort(rows[nid].begin(), rows[nid].end());
    }
    return rows;
}

} // namespace

SteadyState steady_state(const ChainSpace& sp, const SteadyStateOptions& options) {
    const DecPomdpModel& m = *sp.model;
    const int n = sp.num_nodes();
    auto rows = build_kernel(sp);

    SteadyState out;
    out.node_pr.assign(n, 0.0);

    if (n <= options.dense_threshold) {
        out.method = "dense";
        // balance equations P^T x = x with the first replaced by normalization
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            for (const auto& [j, w] : rows[i]) A(j, i) += w;
            A(i, i) -= 1.0;
        }
        for (int j = 0; j < n; ++j) A(0, j) = 1.0;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        b(0) = 1.0;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        out.rcond = lu.rcond();
        if (!(out.rcond > 1e-14)) {
            std::ostringstream msg;
            msg << "steady-state system singular or ill-conditioned (rcond estimate " << out.rcond
                << ")";
            throw Error(ErrorKind::numeric, msg.str());
        }
        Eigen::VectorXd x = lu.solve(b);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            out.node_pr[i] = std::max(x(i), 0.0);
            total += out.node_pr[i];
        }
        if (!(total > 0.0)) throw Error(ErrorKind::numeric, "steady-state solve returned zero mass");
        for (double& p : out.node_pr) p /= total;
        out.iterations = 1;
    } else {
        out.method = "power";
        // lazy-chain iteration: (I + P)/2 keeps the stationary distribution
        // and converges on periodic chains
        std::vector<double> x(n, 0.0), y(n, 0.0);
        for (const auto& [nid, p] : sp.start_nodes) x[nid] += p;
        long it = 0;
        double delta = 1.0;
        for (; it < options.power_max_iter && delta > options.power_tol; ++it) {
            std::fill(y.begin(), y.end(), 0.0);
            for (int i = 0; i < n; ++i) {
                const double xi = x[i];
                if (xi <= 0.0) continue;
                for (const auto& [j, w] : rows[i]) y[j] += xi * w;
            }
            delta = 0.0;
            for (int i = 0; i < n; ++i) {
                const double v = 0.5 * x[i] + 0.5 * y[i];
                delta += std::abs(v - x[i]);
                x[i] = v;
            }
        }
        if (delta > options.power_tol)
            throw Error(ErrorKind::numeric, "steady-state power iteration did not converge (delta " +
                                                std::to_string(delta) + ")");
        double total = 0.0;
        for (double v : x) total += v;
        for (int i = 0; i < n; ++i) out.node_pr[i] = x[i] / total;
        out.iterations = it;
    }

    out.joint_pr.assign(sp.num_joint(), 0.0);
    out.state_pr.assign(m.num_states, 0.0);
    out.state_given_h.assign(sp.num_joint(), {});
    for (int nid = 0; nid < n; ++nid) {
        const auto [jid, s] = sp.nodes[nid];
        out.joint_pr[jid] += out.node_pr[nid];
        out.state_pr[s] += out.node_pr[nid];
    }
    for (int nid = 0; nid < n; ++nid) {
        const auto [jid, s] = sp.nodes[nid];
        if (out.joint_pr[jid] > 0.0 && out.node_pr[nid] > 0.0)
            out.state_given_h[jid].emplace_back(s, out.node_pr[nid] / out.joint_pr[jid]);
    }
    out.local_pr.resize(m.num_agents);
    out.joint_given_local.resize(m.num_agents);
    for (int i = 0; i < m.num_agents; ++i) {
        out.local_pr[i].assign(sp.local_histories[i].size(), 0.0);
        for (int jid = 0; jid < sp.num_joint(); ++jid)
            out.local_pr[i][sp.local_of_joint[i][jid]] += out.joint_pr[jid];
        out.joint_given_local[i].assign(sp.local_histories[i].size(), {});
        for (int jid = 0; jid < sp.num_joint(); ++jid) {
            const int lid = sp.local_of_joint[i][jid];
            if (out.joint_pr[jid] > 0.0 && out.local_pr[i][lid] > 0.0)
                out.joint_given_local[i][lid].emplace_back(jid,
                                                           out.joint_pr[jid] / out.local_pr[i][lid]);
        }
    }
    return out;
}

CentralOperator::CentralOperator(const ChainSpace& space, const SteadyState& steady)
    : space_(space), steady_(steady) {}

size_t CentralOperator::dimension() const {
    return static_cast<size_t>(space_.num_joint()) * space_.model->num_joint_actions();
}

size_t CentralOperator::index(int joint_id, int ja) const {
    return static_cast<size_t>(joint_id) * space_.model->num_joint_actions() + ja;
}

std::vector<double> CentralOperator::apply(std::span<const double> q) const {
    const DecPomdpModel& m = *space_.model;
    const int JA = m.num_joint_actions();
    const int JO = m.num_joint_observations();

    // policy-averaged next value per joint history
    std::vector<double> value(space_.num_joint(), 0.0);
    for (int jid = 0; jid < space_.num_joint(); ++jid) {
        double v = 0.0;
        for (int ja = 0; ja < JA; ++ja) {
            const double pa = space_.joint_prob(jid, ja);
            if (pa > 0.0) v += pa * q[index(jid, ja)];
        }
        value[jid] = v;
    }

    std::vector<double> out(dimension(), 0.0);
    for (int jid = 0; jid < space_.num_joint(); ++jid) {
        const auto& states = steady_.state_given_h[jid];
        if (states.empty()) continue; // zero stationary mass
        for (int ja = 0; ja < JA; ++ja) {
            double v = 0.0;
            for (const auto& [s, ps] : states) {
                const double rexp = space_.expected_reward[static_cast<size_t>(s) * JA + ja];
                const double cont = space_.continue_prob[static_cast<size_t>(s) * JA + ja];
                double boot = 0.0;
                if (cont > 0.0 && m.gamma > 0.0) {
                    for (int jo = 0; jo < JO; ++jo) {
                        const double po = m.ob(s, ja, jo);
                        if (po > 0.0) boot += po * value[space_.succ(jid, ja, jo)];
                    }
                }
                v += ps * (rexp + m.gamma * cont * boot);
            }
            out[index(jid, ja)] = v;
        }
    }
    return out;
}

DecentralOperator::DecentralOperator(const ChainSpace& space, const SteadyState& steady, int agent)
    : space_(space), steady_(steady), agent_(agent) {
    const DecPomdpModel& m = *space_.model;
    const int S = m.num_states;
    const int JA = m.num_joint_actions();
    const int JO = m.num_joint_observations();
    const int nO = m.num_observations[agent];
    obs_marginal_.assign(static_cast<size_t>(S) * JA * nO, 0.0);
    std::vector<int> obs(m.num_agents);
    for (int s = 0; s < S; ++s) {
        for (int ja = 0; ja < JA; ++ja) {
            for (int jo = 0; jo < JO; ++jo) {
                const double po = m.ob(s, ja, jo);
                if (po <= 0.0) continue;
                m.split_joint_observation(jo, obs);
                obs_marginal_[(static_cast<size_t>(s) * JA + ja) * nO + obs[agent]] += po;
            }
        }
    }
}

size_t DecentralOperator::dimension() const {
    return space_.local_histories[agent_].size() * space_.model->num_actions[agent_];
}

size_t DecentralOperator::index(int local_id, int a) const {
    return static_cast<size_t>(local_id) * space_.model->num_actions[agent_] + a;
}

std::vector<double> DecentralOperator::apply(std::span<const double> q) const {
    const DecPomdpModel& m = *space_.model;
    const int JA = m.num_joint_actions();
    const int nA = m.num_actions[agent_];
    const int nO = m.num_observations[agent_];
    const size_t num_local = space_.local_histories[agent_].size();

    // policy-averaged next value per local history
    std::vector<double> value(num_local, 0.0);
    std::vector<double> probs(nA);
    for (size_t lid = 0; lid < num_local; ++lid) {
        const uint64_t lkey = space_.local_histories[agent_][lid].key(nA, nO);
        (*space_.policies)[agent_].probabilities_into(lkey, probs);
        double v = 0.0;
        for (int a = 0; a < nA; ++a) v += probs[a] * q[index(static_cast<int>(lid), a)];
        value[lid] = v;
    }

    // successor local ids, resolved lazily
    auto succ_local = [&](size_t lid, int ai, int oi) -> int {
        FixedMemoryHistory h2 = space_.local_histories[agent_][lid].append(ai, oi);
        auto it = space_.local_history_index[agent_].find(h2.key(nA, nO));
        if (it == space_.local_history_index[agent_].end())
            throw Error(ErrorKind::numeric, "decentralized bootstrap reached an unindexed history");
        return it->second;
    };

    std::vector<double> out(dimension(), 0.0);
    std::vector<int> acts(m.num_agents);
    for (size_t lid = 0; lid < num_local; ++lid) {
        const auto& cond = steady_.joint_given_local[agent_][lid];
        if (cond.empty()) continue;
        for (int ai = 0; ai < nA; ++ai) {
            // bootstrap value per own observation (independent of h_j, a_j, s)
            std::vector<double> next_value(nO);
            for (int oi = 0; oi < nO; ++oi) next_value[oi] = value[succ_local(lid, ai, oi)];

            double v = 0.0;
            for (const auto& [jid, wh] : cond) {
                for (int ja = 0; ja < JA; ++ja) {
                    m.split_joint_action(ja, acts);
                    if (acts[agent_] != ai) continue;
                    double pteam = 1.0;
                    for (int i = 0; i < m.num_agents; ++i)
                        if (i != agent_) pteam *= space_.agent_prob(jid, i, acts[i]);
                    if (pteam <= 0.0) continue;
                    for (const auto& [s, ps] : steady_.state_given_h[jid]) {
                        const double rexp = space_.expected_reward[static_cast<size_t>(s) * JA + ja];
                        const double cont = space_.continue_prob[static_cast<size_t>(s) * JA + ja];
                        double boot = 0.0;
                        if (cont > 0.0 && m.gamma > 0.0) {
                            for (int oi = 0; oi < nO; ++oi) {
                                const double po =
                                    obs_marginal_[(static_cast<size_t>(s) * JA + ja) * nO + oi];
                                if (po > 0.0) boot += po * next_value[oi];
                            }
                        }
                        v += wh * pteam * ps * (rexp + m.gamma * cont * boot);
                    }
                }
            }
            out[index(static_cast<int>(lid), ai)] = v;
        }
    }
    return out;
}

template <typename Op>
FixedPointResult fixed_point(const Op& op, std::span<const double> q0, double gamma, double tol,
                             long max_iter) {
    if (!(gamma >= 0.0) || gamma >= 1.0)
        throw Error(ErrorKind::invalid_argument, "fixed point requires gamma in [0, 1)");
    if (max_iter <= 0)
        max_iter = (gamma > 0.0)
                       ? 10 * static_cast<long>(std::ceil(std::log(tol) / std::log(gamma))) + 100
                       : 100;

    FixedPointResult res;
    res.q.assign(q0.begin(), q0.end());
    if (res.q.size() != op.dimension())
        throw Error(ErrorKind::invalid_argument, "fixed point: initial table has wrong dimension");
    std::deque<double> trace;
    for (long it = 0; it < max_iter; ++it) {
        std::vector<double> q2 = op.apply(res.q);
        double resid = 0.0;
        for (size_t i = 0; i < q2.size(); ++i) resid = std::max(resid, std::abs(q2[i] - res.q[i]));
        res.q = std::move(q2);
        res.iterations = it + 1;
        res.residual = resid;
        trace.push_back(resid);
        if (trace.size() > 5) trace.pop_front();
        if (resid <= tol) return res;
    }
    std::ostringstream msg;
    msg << "fixed-point iteration did not reach tol " << tol << " in " << max_iter
        << " iterations; recent residuals:";
    for (double r : trace) msg << " " << r;
    throw Error(ErrorKind::numeric, msg.str());
}

template FixedPointResult fixed_point<CentralOperator>(const CentralOperator&, std::span<const double>,
                                                       double, double, long);
template FixedPointResult fixed_point<DecentralOperator>(const DecentralOperator&,
                                                         std::span<const double>, double, double, long);

std::vector<double> central_fixed_point(const ChainSpace& space, const SteadyState& steady,
                                        double tol) {
    CentralOperator op(space, steady);
    std::vector<double> q0(op.dimension(), 0.0);
    return fixed_point(op, q0, space.model->gamma, tol).q;
}

std::vector<double> decentral_fixed_point(const ChainSpace& space, const SteadyState& steady,
                                          int agent, double tol) {
    DecentralOperator op(space, steady, agent);
    std::vector<double> q0(op.dimension(), 0.0);
    return fixed_point(op, q0, space.model->gamma, tol).q;
}

std::vector<double> marginalize_central(const ChainSpace& space, const SteadyState& steady, int agent,
                                        std::span<const double> q_central) {
    const DecPomdpModel& m = *space.model;
    const int JA = m.num_joint_actions();
    const int nA = m.num_actions[agent];
    std::vector<double> out(space.local_histories[agent].size() * nA, 0.0);
    std::vector<int> acts(m.num_agents);
    for (size_t lid = 0; lid < space.local_histories[agent].size(); ++lid) {
        for (const auto& [jid, wh] : steady.joint_given_local[agent][lid]) {
            for (int ja = 0; ja < JA; ++ja) {
                m.split_joint_action(ja, acts);
                double pteam = 1.0;
                for (int i = 0; i < m.num_agents; ++i)
                    if (i != agent) pteam *= space.agent_prob(jid, i, acts[i]);
                if (pteam <= 0.0) continue;
                out[lid * nA + acts[agent]] +=
                    wh * pteam * q_central[static_cast<size_t>(jid) * JA + ja];
            }
        }
    }
    return out;
}

GradientMoments gradient_moments(const ChainSpace& space, const SteadyState& steady, int agent,
                                 CriticMode mode, std::span<const double> values) {
    const DecPomdpModel& m = *space.model;
    const int JA = m.num_joint_actions();
    const int nA = m.num_actions[agent];
    GradientMoments gm;
    gm.mean.assign(space.local_histories[agent].size() * nA, 0.0);
    std::vector<double> second(gm.mean.size(), 0.0);
    std::vector<int> acts(m.num_agents);
    for (int jid = 0; jid < space.num_joint(); ++jid) {
        const double ph = steady.joint_pr[jid];
        if (ph <= 0.0) continue;
        const int lid = space.local_of_joint[agent][jid];
        for (int ja = 0; ja < JA; ++ja) {
            const double pa = space.joint_prob(jid, ja);
            if (pa <= 0.0) continue;
            m.split_joint_action(ja, acts);
            const double w = ph * pa;
            const double qv = (mode == CriticMode::centralized)
                                  ? values[static_cast<size_t>(jid) * JA + ja]
                                  : values[static_cast<size_t>(lid) * nA + acts[agent]];
            for (int a = 0; a < nA; ++a) {
                const double g = ((a == acts[agent]) ? 1.0 : 0.0) - space.agent_prob(jid, agent, a);
                const size_t d = static_cast<size_t>(lid) * nA + a;
                gm.mean[d] += w * g * qv;
                second[d] += w * (g * qv) * (g * qv);
            }
        }
    }
    gm.variance.resize(gm.mean.size());
    for (size_t d = 0; d < gm.mean.size(); ++d) gm.variance[d] = second[d] - gm.mean[d] * gm.mean[d];
    return gm;
}

double mav(const ChainSpace& space, int joint_id, int agent, int action,
           std::span<const double> q_central) {
    const DecPomdpModel& m = *space.model;
    const int JA = m.num_joint_actions();
    std::vector<int> acts(m.num_agents);
    double mean = 0.0, second = 0.0;
    for (int ja = 0; ja < JA; ++ja) {
        m.split_joint_action(ja, acts);
        if (acts[agent] != action) continue;
        double pteam = 1.0;
        for (int i = 0; i < m.num_agents; ++i)
            if (i != agent) pteam *= space.agent_prob(joint_id, i, acts[i]);
        const double v = q_central[static_cast<size_t>(joint_id) * JA + ja];
        mean += pteam * v;
        second += pteam * v * v;
    }
    return second - mean * mean;
}

double mov(const ChainSpace& space, const SteadyState& steady, int agent, int local_id,
           int joint_action, std::span<const double> q_central) {
    const int JA = space.model->num_joint_actions();
    double mean = 0.0, second = 0.0;
    for (const auto& [jid, w] : steady.joint_given_local[agent][local_id]) {
        const double v = q_central[static_cast<size_t>(jid) * JA + joint_action];
        mean += w * v;
        second += w * v * v;
    }
    return second - mean * mean;
}

template <typename Op>
ContractionReport contraction_check(const Op& op, double gamma, int num_pairs, Rng& rng,
                                    double slack) {
    ContractionReport rep;
    const size_t dim = op.dimension();
    std::vector<double> q1(dim), q2(dim);
    for (int p = 0; p < num_pairs; ++p) {
        for (size_t i = 0; i < dim; ++i) {
            q1[i] = 20.0 * rng.next_double() - 10.0;
            q2[i] = 20.0 * rng.next_double() - 10.0;
        }
        auto b1 = op.apply(q1);
        auto b2 = op.apply(q2);
        double dq = 0.0, db = 0.0;
        for (size_t i = 0; i < dim; ++i) {
            dq = std::max(dq, std::abs(q1[i] - q2[i]));
            db = std::max(db, std::abs(b1[i] - b2[i]));
        }
        const double excess = db - gamma * dq;
        rep.worst_excess = std::max(rep.worst_excess, excess);
        if (dq > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, db / dq);
        if (excess > slack) {
            rep.ok = false;
            ++rep.violations;
        }
    }
    return rep;
}

template ContractionReport contraction_check<CentralOperator>(const CentralOperator&, double, int,
                                                              Rng&, double);
template ContractionReport contraction_check<DecentralOperator>(const DecentralOperator&, double, int,
                                                                Rng&, double);

} // namespace marl::exact
