#include "driftflow/generation.hpp"

#include <sstream>

namespace driftflow::generation {

namespace {

constexpr std::uint64_t kFollowSalt = 0x666f6c6c6f77ull;
constexpr std::uint64_t kCorruptSalt = 0x67617262ull;

const core::Cluster& require_cluster(const core::ClusterVocabulary& vocab,
                                     const core::ClusterId& id) {
    const core::Cluster* c = vocab.find(id);
    if (c == nullptr)
        throw core::VocabularyError("cluster id '" + id.value() + "' not in vocabulary");
    return *c;
}

void append_cluster_line(std::ostringstream& out, const std::string& heading,
                         const core::Cluster& cluster) {
    out << heading << " " << cluster.description << " (keywords:";
    for (std::size_t i = 0; i < cluster.keywords.size(); ++i)
        out << (i == 0 ? " " : ", ") << cluster.keywords[i];
    out << ")\n";
}

std::string render_body(const core::PairKey& pair, const core::ClusterVocabulary& vocab,
                        const retrieval::RetrievalResult* context) {
    const core::Cluster& first = require_cluster(vocab, pair.first);
    const core::Cluster& second = require_cluster(vocab, pair.second);

    std::ostringstream out;
    out << "A user watched videos from two interest clusters, in order. "
           "Predict the next distinct interest cluster this user will explore.\n";
    append_cluster_line(out, "Cluster 1:", first);
    append_cluster_line(out, "Cluster 2:", second);
    if (context != nullptr) {
        out << "Recently popular successor clusters:\n";
        if (context->items.empty()) {
            out << "- (none)\n";
        } else {
            for (const retrieval::ScoredCluster& item : context->items)
                append_cluster_line(out, "-", require_cluster(vocab, item.cluster));
        }
    }
    out << "Answer with exactly one cluster description from the catalog, and nothing else.";
    return out.str();
}

}  // namespace

std::string to_string(PromptVariant v) {
    return v == PromptVariant::finetune ? "finetune" : "rag";
}

PromptVariant prompt_variant_from_string(const std::string& s) {
    if (s == "finetune") return PromptVariant::finetune;
    if (s == "rag") return PromptVariant::rag;
    throw core::Error("unknown prompt variant '" + s + "'");
}

PromptInstance render_finetune_example(const core::PairKey& pair, const core::ClusterId& label,
                                       const core::ClusterVocabulary& vocab) {
    require_cluster(vocab, label);
    PromptInstance prompt;
    prompt.pair = pair;
    prompt.text = render_body(pair, vocab, nullptr);
    prompt.label = label;  // carried separately, never embedded in the text
    prompt.variant = PromptVariant::finetune;
    return prompt;
}

PromptInstance render_inference_prompt(const core::PairKey& pair,
                                       const core::ClusterVocabulary& vocab) {
    PromptInstance prompt;
    prompt.pair = pair;
    prompt.text = render_body(pair, vocab, nullptr);
    prompt.variant = PromptVariant::finetune;
    return prompt;
}

PromptInstance render_rag_prompt(const core::PairKey& pair,
                                 const retrieval::RetrievalResult& context,
                                 const core::ClusterVocabulary& vocab) {
    if (context.pair != pair)
        throw core::Error("retrieval context pair does not match prompt pair");
    PromptInstance prompt;
    prompt.pair = pair;
    prompt.text = render_body(pair, vocab, &context);
    for (const retrieval::ScoredCluster& item : context.items)
        prompt.injected_context.push_back(item.cluster);
    prompt.variant = PromptVariant::rag;
    return prompt;
}

std::optional<core::ClusterId> resolve_prediction(const std::string& raw,
                                                  const core::ClusterVocabulary& vocab) {
    const core::Cluster* c = vocab.find_by_description(raw);
    if (c == nullptr) return std::nullopt;
    return c->id;
}

SnapshotBackend::SnapshotBackend(SnapshotMapping mapping, const core::ClusterVocabulary& vocab)
    : mapping_(std::move(mapping)), vocab_(&vocab) {}

std::string SnapshotBackend::generate(const PromptInstance& prompt, std::uint64_t) const {
    auto it = mapping_.entries.find(prompt.pair);
    const core::ClusterId& id = it != mapping_.entries.end() ? it->second
                                                             : mapping_.default_cluster;
    return require_cluster(*vocab_, id).description;
}

ContextFollowingBackend::ContextFollowingBackend(double p, SnapshotMapping snapshot,
                                                 const core::ClusterVocabulary& vocab)
    : p_(p), snapshot_(std::move(snapshot), vocab), vocab_(&vocab) {}

std::string ContextFollowingBackend::generate(const PromptInstance& prompt,
                                              std::uint64_t seed) const {
    if (!prompt.injected_context.empty() &&
        core::hash_unit(prompt.text, core::mix_seed(seed, kFollowSalt)) < p_)
        return require_cluster(*vocab_, prompt.injected_context.front()).description;
    return snapshot_.generate(prompt, seed);
}

CorruptingBackend::CorruptingBackend(double q, std::shared_ptr<const GeneratorBackend> inner)
    : q_(q), inner_(std::move(inner)) {
    if (!inner_) throw core::Error("corrupting backend needs a wrapped backend");
}

std::string CorruptingBackend::generate(const PromptInstance& prompt, std::uint64_t seed) const {
    std::string raw = inner_->generate(prompt, seed);
    if (core::hash_unit(prompt.text, core::mix_seed(seed, kCorruptSalt)) < q_)
        return "<<garbled>> " + raw;
    return raw;
}

std::unique_ptr<GeneratorBackend> make_backend(const BackendConfig& config,
                                               SnapshotMapping snapshot,
                                               const core::ClusterVocabulary& vocab) {
    if (config.name == "snapshot")
        return std::make_unique<SnapshotBackend>(std::move(snapshot), vocab);
    if (config.name == "context_following")
        return std::make_unique<ContextFollowingBackend>(config.p, std::move(snapshot), vocab);
    if (config.name == "corrupting") {
        BackendConfig inner_config = config;
        inner_config.name = config.inner;
        if (inner_config.name == "corrupting")
            throw core::Error("corrupting backend cannot wrap itself");
        auto inner = make_backend(inner_config, std::move(snapshot), vocab);
        return std::make_unique<CorruptingBackend>(
            config.q, std::shared_ptr<const GeneratorBackend>(std::move(inner)));
    }
    throw core::Error("unknown backend '" + config.name + "'");
}

}  // namespace driftflow::generation
