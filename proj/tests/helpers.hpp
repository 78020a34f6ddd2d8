#pragma once

#include <string>
#include <vector>

#include "driftflow/core.hpp"
#include "driftflow/stats.hpp"

namespace testutil {

inline driftflow::core::ClusterId id(const std::string& s) {
    return driftflow::core::ClusterId::of(s);
}

inline driftflow::core::Cluster cluster(const std::string& cid, const std::string& description,
                                        std::vector<std::string> keywords) {
    driftflow::core::Cluster c;
    c.id = id(cid);
    c.description = description;
    c.keywords = std::move(keywords);
    return c;
}

// c1..cn with descriptions "interest <i>" and two keywords each.
inline driftflow::core::ClusterVocabulary small_vocab(int n) {
    std::vector<driftflow::core::Cluster> clusters;
    for (int i = 1; i <= n; ++i) {
        const std::string tag = std::to_string(i);
        clusters.push_back(
            cluster("c" + tag, "interest " + tag, {"kw" + tag + "a", "kw" + tag + "b"}));
    }
    return driftflow::core::ClusterVocabulary(std::move(clusters));
}

inline driftflow::core::PairKey pair(const std::string& a, const std::string& b) {
    return driftflow::core::PairKey(id(a), id(b));
}

inline driftflow::core::TransitionTriple triple(const std::string& a, const std::string& b,
                                                const std::string& c) {
    return driftflow::core::TransitionTriple(id(a), id(b), id(c));
}

inline driftflow::stats::FrequencyWindow window(
    int window_id,
    const std::vector<std::tuple<std::string, std::string, std::string, std::int64_t>>& rows) {
    driftflow::stats::FrequencyWindow w;
    w.window_id = window_id;
    for (const auto& [a, b, c, n] : rows) w.add(pair(a, b), id(c), n);
    return w;
}

}  // namespace testutil
