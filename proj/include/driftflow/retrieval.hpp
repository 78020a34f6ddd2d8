#pragma once

#include <optional>
#include <string>
#include <vector>

#include "driftflow/core.hpp"
#include "driftflow/stats.hpp"

namespace driftflow::retrieval {

struct MissingBaselineError : core::Error {
    using core::Error::Error;
};

enum class RetrievalMode { frequency, trend };

std::string to_string(RetrievalMode mode);
RetrievalMode retrieval_mode_from_string(const std::string& s);

struct RetrievalQuery {
    core::PairKey pair;
    RetrievalMode mode = RetrievalMode::frequency;
    int n = 1;
};

struct ScoredCluster {
    core::ClusterId cluster;
    double score = 0.0;
};

struct RetrievalResult {
    core::PairKey pair;
    std::vector<ScoredCluster> items;  // score desc, id asc
    RetrievalMode mode = RetrievalMode::frequency;
    int window_id = 0;
};

// frequency: top-n recent successors of the pair, scored by count.
// trend: top-n by positive count delta versus the baseline window.
RetrievalResult retrieve_instance(const stats::FrequencyWindow& recent,
                                  const stats::FrequencyWindow* previous,
                                  const RetrievalQuery& query);

struct GlobalEntry {
    core::TransitionTriple triple;
    std::int64_t count = 0;
};

// Top-n (pair, next) entries across every pair in the window.
std::vector<GlobalEntry> retrieve_global(const stats::FrequencyWindow& recent, int n);

}  // namespace driftflow::retrieval
