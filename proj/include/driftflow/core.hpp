#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace driftflow::core {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormalizationError : Error {
    using Error::Error;
};

struct VocabularyError : Error {
    using Error::Error;
};

// Lowercase, trim, collapse internal whitespace runs to a single space.
// ASCII case mapping only. Throws NormalizationError if nothing remains.
std::string normalize_label(std::string_view raw);

// Identifier of an interest cluster. Equality is normalized-text equality,
// so the normalized form is fixed at construction.
class ClusterId {
public:
    ClusterId() = default;
    static ClusterId of(std::string_view raw) { return ClusterId(normalize_label(raw)); }

    const std::string& value() const { return value_; }
    bool empty() const { return value_.empty(); }

    auto operator<=>(const ClusterId&) const = default;

private:
    explicit ClusterId(std::string normalized) : value_(std::move(normalized)) {}
    std::string value_;
};

struct Cluster {
    ClusterId id;
    std::vector<std::string> keywords;
    std::string description;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// The predefined cluster set, plus the history length k used for pair keys.
// Construction never rejects malformed input; validate_vocabulary reports it.
class ClusterVocabulary {
public:
    ClusterVocabulary() = default;
    explicit ClusterVocabulary(std::vector<Cluster> clusters, int k = 2);

    const std::vector<Cluster>& clusters() const { return clusters_; }
    std::size_t size() const { return clusters_.size(); }
    int k() const { return k_; }

    bool contains(const ClusterId& id) const { return by_id_.count(id) > 0; }
    const Cluster* find(const ClusterId& id) const;
    // Exact match on normalized description; nullptr when absent or ambiguous.
    const Cluster* find_by_description(std::string_view raw) const;

private:
    std::vector<Cluster> clusters_;
    std::map<ClusterId, std::size_t> by_id_;
    std::map<std::string, std::vector<std::size_t>> by_description_;
    int k_ = 2;
};

ValidationReport validate_vocabulary(const ClusterVocabulary& vocab);

struct InteractionEvent {
    std::string user_id;
    std::int64_t timestamp = 0;  // epoch seconds, >= 0
    ClusterId cluster_id;
    bool positive = false;
};

struct WatchSequence {
    std::string user_id;
    std::vector<ClusterId> clusters;
};

// Ordered pair of consecutive, distinct clusters.
struct PairKey {
    ClusterId first;
    ClusterId second;

    PairKey() = default;
    PairKey(ClusterId f, ClusterId s);

    auto operator<=>(const PairKey&) const = default;
};

// One observed (c1, c2, c_next) successor event.
struct TransitionTriple {
    PairKey pair;
    ClusterId next;

    TransitionTriple() = default;
    TransitionTriple(PairKey p, ClusterId n);
    TransitionTriple(ClusterId c1, ClusterId c2, ClusterId c3)
        : TransitionTriple(PairKey(std::move(c1), std::move(c2)), std::move(c3)) {}

    auto operator<=>(const TransitionTriple&) const = default;
};

struct PairKeyHash {
    std::size_t operator()(const PairKey& p) const noexcept;
};

// Stable 64-bit hash (FNV-1a + splitmix finalizer). Used wherever behavior
// must not depend on std::hash implementation details.
std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed) noexcept;
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;
// Uniform double in [0, 1) derived from stable_hash.
double hash_unit(std::string_view bytes, std::uint64_t seed) noexcept;

}  // namespace driftflow::core
