#include "driftflow/eval.hpp"

#include <algorithm>
#include <set>

#include "driftflow/ingest.hpp"

namespace driftflow::eval {

std::string to_string(EvalMode m) {
    return m == EvalMode::strict_next ? "strict_next" : "window_n";
}

EvalMode eval_mode_from_string(const std::string& s) {
    if (s == "strict_next") return EvalMode::strict_next;
    if (s == "window_n") return EvalMode::window_n;
    throw core::Error("unknown eval mode '" + s + "'");
}

HitRateResult hit_rate(const pipeline::TableVersion& table,
                       std::span<const core::WatchSequence> sequences, const EvalConfig& cfg,
                       const serve::Fallback& fallback) {
    if (cfg.mode == EvalMode::window_n && cfg.horizon < 1)
        throw core::Error("window_n horizon must be >= 1");
    std::int64_t judged = 0;
    std::int64_t hits = 0;
    for (const core::WatchSequence& seq : sequences) {
        const std::vector<core::ClusterId> s = ingest::collapse_adjacent(seq.clusters);
        if (s.size() < 3) continue;
        for (std::size_t i = 0; i + 2 < s.size(); ++i) {
            const core::PairKey pair(s[i], s[i + 1]);
            ++judged;
            const serve::LookupResult r = serve::lookup_in(table, pair, fallback);
            if (!r.prediction) continue;  // miss judges 0
            if (cfg.mode == EvalMode::strict_next) {
                if (*r.prediction == s[i + 2]) ++hits;
            } else {
                const std::size_t end =
                    std::min(s.size(), i + 2 + static_cast<std::size_t>(cfg.horizon));
                for (std::size_t j = i + 2; j < end; ++j) {
                    if (*r.prediction == s[j]) {
                        ++hits;
                        break;
                    }
                }
            }
        }
    }
    if (judged == 0) throw EmptyEvalError("no judgeable positions in evaluation data");
    return {static_cast<double>(hits) / static_cast<double>(judged), judged};
}

double output_overlap(std::span<const generation::GenerationRecord> a,
                      std::span<const generation::GenerationRecord> b) {
    if (a.size() != b.size())
        throw AlignmentError("traces differ in length: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    if (a.empty()) return 1.0;
    std::int64_t equal = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].pair != b[i].pair)
            throw AlignmentError("traces disagree on pair at position " + std::to_string(i));
        if (a[i].resolved && b[i].resolved && *a[i].resolved == *b[i].resolved) ++equal;
    }
    return static_cast<double>(equal) / static_cast<double>(a.size());
}

std::vector<IdentityPoint> topk_identity_rate(const stats::FrequencyWindow& base,
                                              std::span<const stats::FrequencyWindow> later,
                                              int k_top) {
    if (later.empty()) throw core::Error("topk_identity_rate needs at least one later window");
    if (k_top < 1) throw core::Error("k_top must be >= 1");
    std::vector<IdentityPoint> points;
    points.reserve(later.size());
    for (const stats::FrequencyWindow& w : later) {
        double sum = 0.0;
        std::int64_t shared = 0;
        for (const auto& [pair, successors] : base.counts) {
            if (!w.counts.count(pair)) continue;
            const stats::TopKSet a = stats::top_successors(base, pair, k_top);
            const stats::TopKSet b = stats::top_successors(w, pair, k_top);
            const std::set<core::ClusterId> bs(b.members.begin(), b.members.end());
            std::int64_t common = 0;
            for (const core::ClusterId& id : a.members) common += bs.count(id);
            sum += static_cast<double>(common) / static_cast<double>(k_top);
            ++shared;
        }
        IdentityPoint point;
        point.window_id = w.window_id;
        if (shared > 0) point.rate = sum / static_cast<double>(shared);
        points.push_back(point);
    }
    return points;
}

}  // namespace driftflow::eval
