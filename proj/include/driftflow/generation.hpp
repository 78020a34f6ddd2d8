#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "driftflow/core.hpp"
#include "driftflow/retrieval.hpp"

namespace driftflow::generation {

// Bumped whenever the prompt wording changes; stored with every table.
inline constexpr const char* kTemplateVersion = "tmpl-v1";

enum class PromptVariant { finetune, rag };

std::string to_string(PromptVariant v);
PromptVariant prompt_variant_from_string(const std::string& s);

struct PromptInstance {
    core::PairKey pair;
    std::string text;
    std::vector<core::ClusterId> injected_context;  // rag only
    std::optional<core::ClusterId> label;           // finetune only
    PromptVariant variant = PromptVariant::finetune;
};

struct GenerationRecord {
    core::PairKey pair;
    std::string raw;
    std::optional<core::ClusterId> resolved;
    PromptVariant variant = PromptVariant::finetune;
};

PromptInstance render_finetune_example(const core::PairKey& pair, const core::ClusterId& label,
                                       const core::ClusterVocabulary& vocab);

// Same prompt body as the fine-tune template, label-free; used for bulk
// inference without retrieval context.
PromptInstance render_inference_prompt(const core::PairKey& pair,
                                       const core::ClusterVocabulary& vocab);

PromptInstance render_rag_prompt(const core::PairKey& pair,
                                 const retrieval::RetrievalResult& context,
                                 const core::ClusterVocabulary& vocab);

// Exact match of the normalized raw text against normalized cluster
// descriptions; anything else is a non-resolution.
std::optional<core::ClusterId> resolve_prediction(const std::string& raw,
                                                  const core::ClusterVocabulary& vocab);

// Generators must be deterministic in (prompt text, seed) and safe for
// concurrent generate calls.
class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;
    virtual std::string generate(const PromptInstance& prompt, std::uint64_t seed) const = 0;
};

// Frozen pair->cluster knowledge standing in for a fine-tuned model.
struct SnapshotMapping {
    std::map<core::PairKey, core::ClusterId> entries;
    core::ClusterId default_cluster;  // answer for pairs outside the snapshot
};

class SnapshotBackend : public GeneratorBackend {
public:
    SnapshotBackend(SnapshotMapping mapping, const core::ClusterVocabulary& vocab);
    std::string generate(const PromptInstance& prompt, std::uint64_t seed) const override;

private:
    SnapshotMapping mapping_;
    const core::ClusterVocabulary* vocab_;
};

// With probability p returns the first injected-context cluster's
// description, otherwise answers from the snapshot.
class ContextFollowingBackend : public GeneratorBackend {
public:
    ContextFollowingBackend(double p, SnapshotMapping snapshot,
                            const core::ClusterVocabulary& vocab);
    std::string generate(const PromptInstance& prompt, std::uint64_t seed) const override;

private:
    double p_;
    SnapshotBackend snapshot_;
    const core::ClusterVocabulary* vocab_;
};

// Garbles the wrapped backend's output with probability q, driving the
// exact-match rate to 1-q in expectation.
class CorruptingBackend : public GeneratorBackend {
public:
    CorruptingBackend(double q, std::shared_ptr<const GeneratorBackend> inner);
    std::string generate(const PromptInstance& prompt, std::uint64_t seed) const override;

private:
    double q_;
    std::shared_ptr<const GeneratorBackend> inner_;
};

struct BackendConfig {
    std::string name = "snapshot";  // snapshot | context_following | corrupting
    double p = 1.0;                 // context_following: follow probability
    double q = 0.0;                 // corrupting: garble probability
    std::string inner = "snapshot"; // corrupting: wrapped backend name
};

std::unique_ptr<GeneratorBackend> make_backend(const BackendConfig& config,
                                               SnapshotMapping snapshot,
                                               const core::ClusterVocabulary& vocab);

}  // namespace driftflow::generation
