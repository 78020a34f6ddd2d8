#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "driftflow/core.hpp"

namespace driftflow::stats {

struct InsufficientWindowsError : core::Error {
    using core::Error::Error;
};

// Per-window successor counts keyed by cluster pair. Stored counts are
// always positive; windows merge by count addition.
struct FrequencyWindow {
    int window_id = 0;
    std::map<core::PairKey, std::map<core::ClusterId, std::int64_t>> counts;

    std::int64_t total() const;
    std::int64_t pair_total(const core::PairKey& pair) const;
    void add(const core::PairKey& pair, const core::ClusterId& next, std::int64_t count = 1);
    void merge_from(const FrequencyWindow& other);
};

FrequencyWindow merge_windows(std::span<const FrequencyWindow> windows, int window_id);

struct TopKSet {
    core::PairKey pair;
    std::vector<core::ClusterId> members;  // count desc, id asc
};

struct PeriodScore {
    int from_window = 0;
    int to_window = 0;
    std::optional<double> score;  // absent when the windows share no pair
};

struct DriftReport {
    std::vector<PeriodScore> per_transition_scores;
    std::optional<double> mean;
    std::optional<double> variance;  // population variance
};

FrequencyWindow count_transitions(std::span<const core::TransitionTriple> triples, int window_id);

TopKSet top_successors(const FrequencyWindow& w, const core::PairKey& pair, int k_top);

// |a n b| / |a u b|; two empty sets compare as 1.0.
double jaccard(const std::set<core::ClusterId>& a, const std::set<core::ClusterId>& b);

// Mean top-k Jaccard between adjacent windows, averaged over pairs present
// in both. Needs at least two windows.
DriftReport drift_report(std::span<const FrequencyWindow> windows, int k_top);

std::map<core::ClusterId, std::int64_t> frequency_delta(const FrequencyWindow& prev,
                                                        const FrequencyWindow& cur,
                                                        const core::PairKey& pair);

}  // namespace driftflow::stats
