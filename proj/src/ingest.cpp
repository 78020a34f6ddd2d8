#include "driftflow/ingest.hpp"

#include <algorithm>
#include <map>

namespace driftflow::ingest {

std::vector<core::WatchSequence> build_sequences(const EventBatch& batch,
                                                 const core::ClusterVocabulary& vocab) {
    std::map<std::string, std::vector<const core::InteractionEvent*>> per_user;
    for (const core::InteractionEvent& ev : batch.events) {
        if (!vocab.contains(ev.cluster_id))
            throw IngestError("unknown cluster id '" + ev.cluster_id.value() + "' for user '" +
                              ev.user_id + "' at t=" + std::to_string(ev.timestamp));
        if (!ev.positive) continue;
        per_user[ev.user_id].push_back(&ev);
    }
    std::vector<core::WatchSequence> sequences;
    sequences.reserve(per_user.size());
    for (auto& [user, events] : per_user) {
        // stable: timestamp ties keep input order
        std::stable_sort(events.begin(), events.end(),
                         [](const auto* a, const auto* b) { return a->timestamp < b->timestamp; });
        core::WatchSequence seq;
        seq.user_id = user;
        seq.clusters.reserve(events.size());
        for (const auto* ev : events) seq.clusters.push_back(ev->cluster_id);
        sequences.push_back(std::move(seq));
    }
    return sequences;
}

std::vector<core::ClusterId> collapse_adjacent(const std::vector<core::ClusterId>& clusters) {
    std::vector<core::ClusterId> collapsed;
    collapsed.reserve(clusters.size());
    for (const core::ClusterId& c : clusters)
        if (collapsed.empty() || collapsed.back() != c) collapsed.push_back(c);
    return collapsed;
}

std::vector<core::TransitionTriple> dedup_and_extract_triples(const core::WatchSequence& seq) {
    const std::vector<core::ClusterId> collapsed = collapse_adjacent(seq.clusters);
    std::vector<core::TransitionTriple> triples;
    if (collapsed.size() < 3) return triples;
    triples.reserve(collapsed.size() - 2);
    for (std::size_t i = 0; i + 2 < collapsed.size(); ++i)
        triples.emplace_back(collapsed[i], collapsed[i + 1], collapsed[i + 2]);
    return triples;
}

std::vector<core::TransitionTriple> extract_batch_triples(const EventBatch& batch,
                                                          const core::ClusterVocabulary& vocab) {
    std::vector<core::TransitionTriple> triples;
    for (const core::WatchSequence& seq : build_sequences(batch, vocab)) {
        std::vector<core::TransitionTriple> t = dedup_and_extract_triples(seq);
        triples.insert(triples.end(), t.begin(), t.end());
    }
    return triples;
}

}  // namespace driftflow::ingest
