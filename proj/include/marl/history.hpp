#pragma once

#include <cstdint>
#include <vector>

#include "marl/error.hpp"

namespace marl {

/// One (action, observation) step of an agent's history. The action is -1 for
/// an episode-start observation that precedes any action.
struct HistoryEntry {
    int action = -1;
    int observation = 0;

    bool operator==(const HistoryEntry&) const = default;
};

/// Sliding window of the last k (action, observation) pairs of one agent.
/// Appending to a full window evicts the oldest entry; k = 0 stays empty
/// forever (memoryless policies). Histories are value types and canonically
/// encodable as integers so tables keyed by them are exact.
class FixedMemoryHistory {
public:
    FixedMemoryHistory() = default;
    explicit FixedMemoryHistory(int memory_k) : memory_(memory_k) {
        if (memory_k < 0)
            throw Error(ErrorKind::invalid_argument, "history memory must be >= 0");
    }

    static FixedMemoryHistory initial(int memory_k) { return FixedMemoryHistory(memory_k); }

    /// Episode-start observation with no preceding action.
    static FixedMemoryHistory initial_observation(int memory_k, int observation) {
        return FixedMemoryHistory(memory_k).append(-1, observation);
    }

    FixedMemoryHistory append(int action, int observation) const {
        FixedMemoryHistory next(*this);
        if (memory_ == 0) return next;
        if (static_cast<int>(next.entries_.size()) == memory_)
            next.entries_.erase(next.entries_.begin());
        next.entries_.push_back({action, observation});
        return next;
    }

    int size() const { return static_cast<int>(entries_.size()); }
    int memory() const { return memory_; }
    bool empty() const { return entries_.empty(); }
    const std::vector<HistoryEntry>& entries() const { return entries_; }

    /// Equality is over contents only; two histories with different capacity
    /// but identical entry lists compare equal (they key the same tables).
    bool operator==(const FixedMemoryHistory& other) const {
        return entries_ == other.entries_;
    }

    /// Canonical integer encoding for an alphabet of `num_actions` actions and
    /// `num_observations` observations. Injective for all histories up to the
    /// capacity admitted by key_capacity().
    uint64_t key(int num_actions, int num_observations) const {
        const uint64_t entry_codes =
            (static_cast<uint64_t>(num_actions) + 1) * static_cast<uint64_t>(num_observations);
        uint64_t k = 0;
        for (const auto& e : entries_) {
            uint64_t code = (static_cast<uint64_t>(e.action + 1)) * num_observations + e.observation;
            k = k * (entry_codes + 1) + (code + 1);
        }
        return k;
    }

    /// Largest window length whose keys fit a uint64 without collision.
    static int key_capacity(int num_actions, int num_observations) {
        const uint64_t base =
            (static_cast<uint64_t>(num_actions) + 1) * static_cast<uint64_t>(num_observations) + 1;
        uint64_t k = 0;
        int depth = 0;
        while (depth < 64) {
            if (k > (UINT64_MAX - base) / base) break;
            k = k * base + base;
            ++depth;
        }
        return depth;
    }

private:
    std::vector<HistoryEntry> entries_;
    int memory_ = 0;
};

} // namespace marl
