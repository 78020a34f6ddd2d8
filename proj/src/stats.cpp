#include "driftflow/stats.hpp"

#include <algorithm>

namespace driftflow::stats {

std::int64_t FrequencyWindow::total() const {
    std::int64_t sum = 0;
    for (const auto& [pair, successors] : counts)
        for (const auto& [next, count] : successors) sum += count;
    return sum;
}

std::int64_t FrequencyWindow::pair_total(const core::PairKey& pair) const {
    auto it = counts.find(pair);
    if (it == counts.end()) return 0;
    std::int64_t sum = 0;
    for (const auto& [next, count] : it->second) sum += count;
    return sum;
}

void FrequencyWindow::add(const core::PairKey& pair, const core::ClusterId& next,
                          std::int64_t count) {
    if (count <= 0) return;
    counts[pair][next] += count;
}

void FrequencyWindow::merge_from(const FrequencyWindow& other) {
    for (const auto& [pair, successors] : other.counts)
        for (const auto& [next, count] : successors) add(pair, next, count);
}

FrequencyWindow merge_windows(std::span<const FrequencyWindow> windows, int window_id) {
    FrequencyWindow merged;
    merged.window_id = window_id;
    for (const FrequencyWindow& w : windows) merged.merge_from(w);
    return merged;
}

FrequencyWindow count_transitions(std::span<const core::TransitionTriple> triples, int window_id) {
    FrequencyWindow w;
    w.window_id = window_id;
    for (const core::TransitionTriple& t : triples) w.add(t.pair, t.next);
    return w;
}

TopKSet top_successors(const FrequencyWindow& w, const core::PairKey& pair, int k_top) {
    TopKSet result;
    result.pair = pair;
    auto it = w.counts.find(pair);
    if (it == w.counts.end() || k_top <= 0) return result;
    std::vector<std::pair<core::ClusterId, std::int64_t>> entries(it->second.begin(),
                                                                  it->second.end());
    // count desc, id asc; the map already yields ids ascending, so stable
    // sort on count alone preserves the tie-break
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    const std::size_t take = std::min<std::size_t>(entries.size(), static_cast<std::size_t>(k_top));
    result.members.reserve(take);
    for (std::size_t i = 0; i < take; ++i) result.members.push_back(entries[i].first);
    return result;
}

double jaccard(const std::set<core::ClusterId>& a, const std::set<core::ClusterId>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t intersection = 0;
    for (const core::ClusterId& id : a) intersection += b.count(id);
    const std::size_t uni = a.size() + b.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(uni);
}

DriftReport drift_report(std::span<const FrequencyWindow> windows, int k_top) {
    if (windows.size() < 2)
        throw InsufficientWindowsError("drift_report needs at least 2 windows, got " +
                                       std::to_string(windows.size()));
    DriftReport report;
    std::vector<double> present;
    for (std::size_t w = 0; w + 1 < windows.size(); ++w) {
        const FrequencyWindow& cur = windows[w];
        const FrequencyWindow& nxt = windows[w + 1];
        double sum = 0.0;
        std::int64_t shared = 0;
        for (const auto& [pair, successors] : cur.counts) {
            if (!nxt.counts.count(pair)) continue;
            const TopKSet a = top_successors(cur, pair, k_top);
            const TopKSet b = top_successors(nxt, pair, k_top);
            sum += jaccard(std::set<core::ClusterId>(a.members.begin(), a.members.end()),
                           std::set<core::ClusterId>(b.members.begin(), b.members.end()));
            ++shared;
        }
        PeriodScore score;
        score.from_window = cur.window_id;
        score.to_window = nxt.window_id;
        if (shared > 0) {
            score.score = sum / static_cast<double>(shared);
            present.push_back(*score.score);
        }
        report.per_transition_scores.push_back(score);
    }
    if (!present.empty()) {
        double mean = 0.0;
        for (double s : present) mean += s;
        mean /= static_cast<double>(present.size());
        double var = 0.0;
        for (double s : present) var += (s - mean) * (s - mean);
        var /= static_cast<double>(present.size());
        report.mean = mean;
        report.variance = var;
    }
    return report;
}

std::map<core::ClusterId, std::int64_t> frequency_delta(const FrequencyWindow& prev,
                                                        const FrequencyWindow& cur,
                                                        const core::PairKey& pair) {
    std::map<core::ClusterId, std::int64_t> delta;
    if (auto it = cur.counts.find(pair); it != cur.counts.end())
        for (const auto& [next, count] : it->second) delta[next] += count;
    if (auto it = prev.counts.find(pair); it != prev.counts.end())
        for (const auto& [next, count] : it->second) delta[next] -= count;
    return delta;
}

}  // namespace driftflow::stats
