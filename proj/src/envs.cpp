#include "marl/envs.hpp"

#include <cmath>

#include "marl/rng.hpp"

namespace marl {

DecPomdpModel build_matrix_game(const std::string& name,
                                const std::vector<std::vector<double>>& payoff_by_a2_a1,
                                double gamma) {
    const int n2 = static_cast<int>(payoff_by_a2_a1.size());
    const int n1 = static_cast<int>(payoff_by_a2_a1.front().size());
    DecPomdpModel m = make_model(name, 2, {n1, n2}, {1, 1}, gamma, 1);
    m.initial_state = {1.0, 0.0};
    m.terminal = {0, 1};
    for (int a1 = 0; a1 < n1; ++a1) {
        for (int a2 = 0; a2 < n2; ++a2) {
            const int actions[2] = {a1, a2};
            const int ja = m.joint_action_index(actions);
            m.tr(0, ja, 1) = 1.0;
            m.tr(1, ja, 1) = 1.0;
            m.ob(0, ja, 0) = 1.0;
            m.ob(1, ja, 0) = 1.0;
            m.rew(0, ja, 1) = payoff_by_a2_a1[a2][a1];
        }
    }
    m.validate();
    return m;
}

DecPomdpModel build_climb_game() {
    return build_matrix_game("climb", {{11, -30, 0}, {-30, 7, 6}, {0, 0, 5}});
}

DecPomdpModel build_morning_game() {
    return build_matrix_game("morning", {{1, 0}, {0, 3}});
}

namespace {

/// One-step games whose hidden state is the pair of private observations.
/// States 0..3 encode (b1, b2); state 4 is the absorbing end.
DecPomdpModel one_step_private_obs_game(const std::string& name, int num_actions,
                                        double (*team_reward)(int b1, int b2, int a1, int a2,
                                                              const double* params),
                                        const double* params) {
    DecPomdpModel m = make_model(name, 5, {num_actions, num_actions}, {2, 2}, 0.95, 1);
    m.initial_observation.assign(static_cast<size_t>(m.num_states) * 4, 0.0);
    m.terminal = {0, 0, 0, 0, 1};
    for (int s = 0; s < 4; ++s) {
        const int b1 = s / 2, b2 = s % 2;
        m.initial_state[s] = 0.25;
        const int obs[2] = {b1, b2};
        m.init_ob(s, m.joint_observation_index(obs)) = 1.0;
        for (int a1 = 0; a1 < num_actions; ++a1) {
            for (int a2 = 0; a2 < num_actions; ++a2) {
                const int actions[2] = {a1, a2};
                const int ja = m.joint_action_index(actions);
                m.tr(s, ja, 4) = 1.0;
                m.ob(s, ja, 0) = 1.0;
                m.rew(s, ja, 4) = team_reward(b1, b2, a1, a2, params);
            }
        }
    }
    for (int ja = 0; ja < m.num_joint_actions(); ++ja) {
        m.tr(4, ja, 4) = 1.0;
        m.ob(4, ja, 0) = 1.0;
    }
    m.init_ob(4, 0) = 1.0;
    m.validate();
    return m;
}

double guess_reward(int b1, int b2, int a1, int a2, const double* params) {
    const double r_match = params[0], safe = params[1];
    if (a1 == 2 && a2 == 2) return safe;
    double score = 0.0;
    if (a1 < 2) score += (a1 == b2) ? 1.0 : -1.0;
    if (a2 < 2) score += (a2 == b1) ? 1.0 : -1.0;
    return 0.5 * r_match * score;
}

double binary_match_reward(int b1, int b2, int a1, int a2, const double* params) {
    const double r = params[0];
    return ((a1 == b2) ? r : -r) + ((a2 == b1) ? r : -r);
}

} // namespace

DecPomdpModel build_guess_game(double r_match, double safe_reward) {
    const double params[2] = {r_match, safe_reward};
    return one_step_private_obs_game("guess", 3, guess_reward, params);
}

DecPomdpModel build_binary_match_game(double r) {
    const double params[1] = {r};
    return one_step_private_obs_game("binary_match", 2, binary_match_reward, params);
}

DecPomdpModel build_dectiger(double gamma) {
    // States: 0 tiger-left, 1 tiger-right, 2 done. Actions: 0 open-left,
    // 1 open-right, 2 listen. Observations: 0 hear-left, 1 hear-right.
    DecPomdpModel m = make_model("dectiger", 3, {3, 3}, {2, 2}, gamma, 0);
    m.initial_state = {0.5, 0.5, 0.0};
    m.terminal = {0, 0, 1};
    auto reward_of = [](int tiger, int a1, int a2) -> double {
        const int good = 1 - tiger; // door without the tiger
        if (a1 == 2 && a2 == 2) return -2.0;
        if (a1 == 2 || a2 == 2) {
            const int open = (a1 == 2) ? a2 : a1;
            return open == good ? 9.0 : -101.0;
        }
        if (a1 == a2) return a1 == good ? 20.0 : -50.0;
        return -100.0;
    };
    for (int s = 0; s < 2; ++s) {
        const double p_correct = 0.85;
        for (int a1 = 0; a1 < 3; ++a1) {
            for (int a2 = 0; a2 < 3; ++a2) {
                const int actions[2] = {a1, a2};
                const int ja = m.joint_action_index(actions);
                const double r = reward_of(s, a1, a2);
                if (a1 == 2 && a2 == 2) {
                    m.tr(s, ja, s) = 1.0;
                    for (int o1 = 0; o1 < 2; ++o1) {
                        for (int o2 = 0; o2 < 2; ++o2) {
                            const double p1 = (o1 == s) ? p_correct : 1.0 - p_correct;
                            const double p2 = (o2 == s) ? p_correct : 1.0 - p_correct;
                            const int obs[2] = {o1, o2};
                            m.ob(s, ja, m.joint_observation_index(obs)) = p1 * p2;
                        }
                    }
                } else {
                    m.tr(s, ja, 2) = 1.0;
                    for (int jo = 0; jo < 4; ++jo) m.ob(s, ja, jo) = 0.25;
                }
                for (int s2 = 0; s2 < 3; ++s2) m.rew(s, ja, s2) = r;
            }
        }
    }
    for (int ja = 0; ja < 9; ++ja) {
        m.tr(2, ja, 2) = 1.0;
        for (int jo = 0; jo < 4; ++jo) m.ob(2, ja, jo) = 0.25;
        for (int s2 = 0; s2 < 3; ++s2) m.rew(2, ja, s2) = 0.0;
    }
    m.validate();
    return m;
}

namespace {

void dirichlet_row(Rng& rng, std::span<double> row) {
    // Dirichlet(1) via normalized exponentials; full support.
    double total = 0.0;
    for (double& v : row) {
        double u = rng.next_double();
        while (u <= 0.0) u = rng.next_double();
        v = -std::log(u);
        total += v;
    }
    for (double& v : row) v /= total;
}

} // namespace

DecPomdpModel build_random_model(uint64_t seed, const RandomModelOptions& opts) {
    Rng rng(derive_seed(seed, 0x7a5d));
    if (opts.one_step) {
        const int nO = opts.num_observations;
        const int nA = opts.num_actions;
        const int JO = nO * nO;
        const int S = JO + 1; // one state per joint observation + done
        DecPomdpModel m = make_model("random_one_step", S, {nA, nA}, {nO, nO}, opts.gamma, 1);
        m.initial_observation.assign(static_cast<size_t>(S) * JO, 0.0);
        for (int s = 0; s < JO; ++s) {
            m.initial_state[s] = 1.0 / JO;
            m.init_ob(s, s) = 1.0;
            for (int ja = 0; ja < m.num_joint_actions(); ++ja) {
                m.tr(s, ja, JO) = 1.0;
                m.ob(s, ja, 0) = 1.0;
                m.rew(s, ja, JO) = 2.0 * rng.next_double() - 1.0;
            }
        }
        m.terminal.assign(S, 0);
        m.terminal[JO] = 1;
        m.init_ob(JO, 0) = 1.0;
        for (int ja = 0; ja < m.num_joint_actions(); ++ja) {
            m.tr(JO, ja, JO) = 1.0;
            m.ob(JO, ja, 0) = 1.0;
        }
        m.validate();
        return m;
    }

    const int S = opts.num_states + (opts.episodic ? 1 : 0);
    DecPomdpModel m = make_model(opts.episodic ? "random_episodic" : "random_continuing", S,
                                 {opts.num_actions, opts.num_actions},
                                 {opts.num_observations, opts.num_observations}, opts.gamma, 0);
    const int JA = m.num_joint_actions();
    const int JO = m.num_joint_observations();
    for (int s = 0; s < opts.num_states; ++s) {
        m.initial_state[s] = 0.0;
        for (int ja = 0; ja < JA; ++ja) {
            dirichlet_row(rng, {&m.observation[(static_cast<size_t>(s) * JA + ja) * JO], (size_t)JO});
            std::vector<double> row(opts.num_states);
            dirichlet_row(rng, row);
            if (opts.episodic) {
                const double stop = 0.05 + 0.25 * rng.next_double();
                for (int s2 = 0; s2 < opts.num_states; ++s2) m.tr(s, ja, s2) = row[s2] * (1.0 - stop);
                m.tr(s, ja, opts.num_states) = stop;
            } else {
                for (int s2 = 0; s2 < opts.num_states; ++s2) m.tr(s, ja, s2) = row[s2];
            }
            for (int s2 = 0; s2 < S; ++s2) m.rew(s, ja, s2) = 2.0 * rng.next_double() - 1.0;
        }
    }
    std::vector<double> p0(opts.num_states);
    dirichlet_row(rng, p0);
    for (int s = 0; s < opts.num_states; ++s) m.initial_state[s] = p0[s];
    if (opts.episodic) {
        m.terminal[opts.num_states] = 1;
        for (int ja = 0; ja < JA; ++ja) {
            m.tr(opts.num_states, ja, opts.num_states) = 1.0;
            m.ob(opts.num_states, ja, 0) = 1.0;
        }
    }
    m.validate();
    return m;
}

} // namespace marl
