#include "driftflow/retrieval.hpp"

#include <algorithm>

namespace driftflow::retrieval {

std::string to_string(RetrievalMode mode) {
    return mode == RetrievalMode::frequency ? "frequency" : "trend";
}

RetrievalMode retrieval_mode_from_string(const std::string& s) {
    if (s == "frequency") return RetrievalMode::frequency;
    if (s == "trend") return RetrievalMode::trend;
    throw core::Error("unknown retrieval mode '" + s + "'");
}

namespace {

// id-ascending input + stable sort on score keeps ties deterministic
std::vector<ScoredCluster> rank(std::vector<ScoredCluster> items, int n) {
    std::stable_sort(items.begin(), items.end(),
                     [](const ScoredCluster& a, const ScoredCluster& b) { return a.score > b.score; });
    if (items.size() > static_cast<std::size_t>(n)) items.resize(static_cast<std::size_t>(n));
    return items;
}

}  // namespace

RetrievalResult retrieve_instance(const stats::FrequencyWindow& recent,
                                  const stats::FrequencyWindow* previous,
                                  const RetrievalQuery& query) {
    if (query.n < 1) throw core::Error("retrieval n must be >= 1");
    RetrievalResult result;
    result.pair = query.pair;
    result.mode = query.mode;
    result.window_id = recent.window_id;

    if (query.mode == RetrievalMode::frequency) {
        auto it = recent.counts.find(query.pair);
        if (it == recent.counts.end()) return result;
        std::vector<ScoredCluster> items;
        items.reserve(it->second.size());
        for (const auto& [next, count] : it->second)
            items.push_back({next, static_cast<double>(count)});
        result.items = rank(std::move(items), query.n);
        return result;
    }

    if (previous == nullptr)
        throw MissingBaselineError("trend retrieval requires a baseline window");
    std::vector<ScoredCluster> items;
    for (const auto& [next, delta] : stats::frequency_delta(*previous, recent, query.pair)) {
        if (delta <= 0) continue;  // declining interests are not injected
        items.push_back({next, static_cast<double>(delta)});
    }
    result.items = rank(std::move(items), query.n);
    return result;
}

std::vector<GlobalEntry> retrieve_global(const stats::FrequencyWindow& recent, int n) {
    if (n < 1) throw core::Error("retrieval n must be >= 1");
    std::vector<GlobalEntry> entries;
    for (const auto& [pair, successors] : recent.counts)
        for (const auto& [next, count] : successors)
            entries.push_back({core::TransitionTriple(pair, next), count});
    // counts desc; map iteration already gives (first, second, next) ascending
    std::stable_sort(entries.begin(), entries.end(),
                     [](const GlobalEntry& a, const GlobalEntry& b) { return a.count > b.count; });
    if (entries.size() > static_cast<std::size_t>(n)) entries.resize(static_cast<std::size_t>(n));
    return entries;
}

}  // namespace driftflow::retrieval
