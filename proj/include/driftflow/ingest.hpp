#pragma once

#include <vector>

#include "driftflow/core.hpp"

namespace driftflow::ingest {

struct IngestError : core::Error {
    using core::Error::Error;
};

struct EventBatch {
    std::vector<core::InteractionEvent> events;
    int source_day = 0;
};

// Per user: keep positive events, stable-sort by timestamp, emit one sequence
// per user with at least one kept event. Sequences are ordered by user id.
// Unknown cluster ids raise IngestError naming the offending record.
std::vector<core::WatchSequence> build_sequences(const EventBatch& batch,
                                                 const core::ClusterVocabulary& vocab);

// Collapse runs of adjacent equal ids to one occurrence.
std::vector<core::ClusterId> collapse_adjacent(const std::vector<core::ClusterId>& clusters);

// Sliding window of (c_i, c_i+1, c_i+2) over the collapsed sequence;
// empty when fewer than three entries remain.
std::vector<core::TransitionTriple> dedup_and_extract_triples(const core::WatchSequence& seq);

// build_sequences + dedup_and_extract_triples over a whole batch.
std::vector<core::TransitionTriple> extract_batch_triples(const EventBatch& batch,
                                                          const core::ClusterVocabulary& vocab);

}  // namespace driftflow::ingest
