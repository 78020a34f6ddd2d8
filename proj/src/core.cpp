#include "driftflow/core.hpp"

#include <cctype>

namespace driftflow::core {

std::string normalize_label(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (unsigned char ch : raw) {
        if (std::isspace(ch)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(ch)));
    }
    if (out.empty()) throw NormalizationError("label empty after normalization");
    return out;
}

ClusterVocabulary::ClusterVocabulary(std::vector<Cluster> clusters, int k)
    : clusters_(std::move(clusters)), k_(k) {
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
        by_id_.emplace(clusters_[i].id, i);  // first occurrence wins on duplicates
        try {
            by_description_[normalize_label(clusters_[i].description)].push_back(i);
        } catch (const NormalizationError&) {
            // empty description: unresolvable, reported by validate_vocabulary
        }
    }
}

const Cluster* ClusterVocabulary::find(const ClusterId& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &clusters_[it->second];
}

const Cluster* ClusterVocabulary::find_by_description(std::string_view raw) const {
    std::string key;
    try {
        key = normalize_label(raw);
    } catch (const NormalizationError&) {
        return nullptr;
    }
    auto it = by_description_.find(key);
    if (it == by_description_.end() || it->second.size() != 1) return nullptr;
    return &clusters_[it->second.front()];
}

ValidationReport validate_vocabulary(const ClusterVocabulary& vocab) {
    ValidationReport report;
    std::map<ClusterId, int> id_uses;
    std::map<std::string, int> desc_uses;
    for (const Cluster& c : vocab.clusters()) {
        ++id_uses[c.id];
        if (c.keywords.empty())
            report.violations.push_back("cluster '" + c.id.value() + "' has no keywords");
        for (const std::string& kw : c.keywords) {
            try {
                normalize_label(kw);
            } catch (const NormalizationError&) {
                report.violations.push_back("cluster '" + c.id.value() + "' has an empty keyword");
            }
        }
        try {
            ++desc_uses[normalize_label(c.description)];
        } catch (const NormalizationError&) {
            report.violations.push_back("cluster '" + c.id.value() + "' has an empty description");
        }
    }
    for (const auto& [id, n] : id_uses)
        if (n > 1) report.violations.push_back("duplicate cluster id '" + id.value() + "'");
    for (const auto& [desc, n] : desc_uses)
        if (n > 1) report.violations.push_back("duplicate normalized description '" + desc + "'");
    return report;
}

PairKey::PairKey(ClusterId f, ClusterId s) : first(std::move(f)), second(std::move(s)) {
    if (first == second)
        throw Error("pair key elements must be distinct: '" + first.value() + "'");
}

TransitionTriple::TransitionTriple(PairKey p, ClusterId n) : pair(std::move(p)), next(std::move(n)) {
    if (next == pair.second)
        throw Error("triple next must differ from pair.second: '" + next.value() + "'");
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed) noexcept {
    std::uint64_t h = kFnvOffset;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= kFnvPrime;
    }
    return splitmix64(h ^ splitmix64(seed));
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(a ^ splitmix64(b + 0x165667b19e3779f9ull));
}

double hash_unit(std::string_view bytes, std::uint64_t seed) noexcept {
    // 53 high bits -> [0, 1)
    return static_cast<double>(stable_hash(bytes, seed) >> 11) * 0x1.0p-53;
}

std::size_t PairKeyHash::operator()(const PairKey& p) const noexcept {
    std::uint64_t h = stable_hash(p.first.value(), 0x70616972ull);
    return static_cast<std::size_t>(stable_hash(p.second.value(), h));
}

}  // namespace driftflow::core
