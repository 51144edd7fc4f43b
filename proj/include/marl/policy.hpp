#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "marl/rng.hpp"

namespace marl {

/// Tabular softmax policy over integer history keys. Logits default to zero
/// (uniform) the first time a history is seen; with a RandomInit attached they
/// instead default to seeded Gaussian noise, which makes "a random softmax
/// policy" well defined over histories that are only discovered lazily.
class SoftmaxPolicy {
public:
    struct RandomInit {
        uint64_t seed = 0;
        double scale = 1.0;
    };

    SoftmaxPolicy() = default;
    explicit SoftmaxPolicy(int num_actions) : num_actions_(num_actions) {}
    SoftmaxPolicy(int num_actions, RandomInit init)
        : num_actions_(num_actions), random_init_(init) {}

    int num_actions() const { return num_actions_; }

    const std::vector<double>& logits(uint64_t history_key) const {
        return table(history_key);
    }

    std::vector<double>& mutable_logits(uint64_t history_key) {
        return table(history_key);
    }

    void probabilities_into(uint64_t history_key, std::span<double> out) const {
        const auto& z = table(history_key);
        double zmax = z[0];
        for (double v : z) zmax = std::max(zmax, v);
        double total = 0.0;
        for (int a = 0; a < num_actions_; ++a) {
            out[a] = std::exp(z[a] - zmax);
            total += out[a];
        }
        for (int a = 0; a < num_actions_; ++a) out[a] /= total;
    }

    std::vector<double> probabilities(uint64_t history_key) const {
        std::vector<double> p(num_actions_);
        probabilities_into(history_key, p);
        return p;
    }

    int sample(uint64_t history_key, Rng& rng) const {
        std::vector<double> p(num_actions_);
        probabilities_into(history_key, p);
        return rng.categorical(p);
    }

    size_t num_seen_histories() const { return logits_.size(); }
    const std::unordered_map<uint64_t, std::vector<double>>& all_logits() const { return logits_; }

    void set_logits(uint64_t history_key, std::vector<double> z) {
        logits_[history_key] = std::move(z);
    }

private:
    std::vector<double>& table(uint64_t key) const {
        auto it = logits_.find(key);
        if (it != logits_.end()) return it->second;
        std::vector<double> z(num_actions_, 0.0);
        if (random_init_) {
            Rng r(derive_seed(random_init_->seed, key));
            for (double& v : z) v = random_init_->scale * r.normal();
        }
        return logits_.emplace(key, std::move(z)).first->second;
    }

    int num_actions_ = 0;
    std::optional<RandomInit> random_init_;
    mutable std::unordered_map<uint64_t, std::vector<double>> logits_;
};

/// Uniform policies for every agent of a model-shaped action space.
inline std::vector<SoftmaxPolicy> uniform_policies(std::span<const int> num_actions) {
    std::vector<SoftmaxPolicy> out;
    out.reserve(num_actions.size());
    for (int n : num_actions) out.emplace_back(n);
    return out;
}

inline std::vector<SoftmaxPolicy> random_policies(std::span<const int> num_actions, uint64_t seed,
                                                  double scale = 1.0) {
    std::vector<SoftmaxPolicy> out;
    out.reserve(num_actions.size());
    for (size_t i = 0; i < num_actions.size(); ++i)
        out.emplace_back(num_actions[i], SoftmaxPolicy::RandomInit{derive_seed(seed, i), scale});
    return out;
}

} // namespace marl
