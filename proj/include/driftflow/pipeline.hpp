#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "driftflow/core.hpp"
#include "driftflow/generation.hpp"
#include "driftflow/ingest.hpp"
#include "driftflow/retrieval.hpp"
#include "driftflow/stats.hpp"

namespace driftflow::serve {
class TableStore;
}

namespace driftflow::pipeline {

struct BuildError : core::Error {
    using core::Error::Error;
};

enum class Provenance { finetune, rag };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct QualityGateReport {
    double exact_match_rate = 1.0;
    double test_recall = 1.0;
    std::int64_t prompts_issued = 0;
    std::int64_t unresolved = 0;
};

// An immutable published pair->prediction mapping. Entries live in a hash
// map for O(1) serving lookups; serialization sorts by pair.
struct TableVersion {
    std::int64_t version_id = 0;
    int created_day = 0;
    std::unordered_map<core::PairKey, core::ClusterId, core::PairKeyHash> entries;
    Provenance provenance = Provenance::finetune;
    std::string template_version = generation::kTemplateVersion;
    QualityGateReport gate_report;
};

struct RetrievalDefaults {
    retrieval::RetrievalMode mode = retrieval::RetrievalMode::frequency;
    int n = 1;
};

struct GateThresholds {
    double exact_match_min = 0.90;
    double recall_min = 0.015;
};

struct ScheduleConfig {
    int finetune_period_days = 30;
    int rag_period_days = 3;
    RetrievalDefaults retrieval;
    GateThresholds gates;
    std::int64_t min_support = 0;
    int parallelism = 1;
    std::uint64_t seed = 0;
    int max_retries = 2;  // per-prompt backend retries before BuildError
};

// Pairs whose total successor count reaches min_support, (first, second)
// ascending.
std::vector<core::PairKey> enumerate_pairs(const stats::FrequencyWindow& w,
                                           std::int64_t min_support);

struct BuildOutput {
    TableVersion table;
    QualityGateReport report;
    std::vector<generation::GenerationRecord> records;  // one per pair, pair order
};

// One prompt per pair (RAG variant iff use_rag, with instance retrieval
// context); resolved predictions become entries, unresolved are dropped and
// counted. test_recall is the strict-next hit rate of the entries over
// test_triples.
BuildOutput build_table(const generation::GeneratorBackend& backend,
                        std::span<const core::PairKey> pairs,
                        const stats::FrequencyWindow& recent,
                        const stats::FrequencyWindow* previous, const ScheduleConfig& cfg,
                        const core::ClusterVocabulary& vocab, bool use_rag,
                        std::span<const core::TransitionTriple> test_triples,
                        std::int64_t version_id, int created_day);

struct GateDecision {
    bool passed = false;
    std::string reason;  // names the violated gate and values
};

// Halt iff exact_match_rate < exact_match_min or test_recall < recall_min,
// both strict.
GateDecision apply_quality_gates(const QualityGateReport& report, const ScheduleConfig& cfg);

// Builds the frozen pair->cluster mapping a fine-tune event re-baselines to:
// top-1 successor per pair, default = globally most frequent successor.
generation::SnapshotMapping snapshot_from_window(const stats::FrequencyWindow& w,
                                                 const core::ClusterVocabulary& vocab);

using BackendFactory = std::function<std::unique_ptr<generation::GeneratorBackend>(
    int day, const generation::SnapshotMapping& snapshot)>;

struct ScheduleEvent {
    int day = 0;
    Provenance provenance = Provenance::finetune;
    bool published = false;
    std::int64_t version_id = 0;  // 0 when not published
    std::string halt_reason;      // empty when published
};

struct ScheduleTrace {
    std::vector<ScheduleEvent> events;
};

// Hybrid refresh: on day d = 0 (mod finetune period) re-baseline the
// snapshot from the trailing window and build a finetune table; on other
// days d = 0 (mod rag period) build a RAG table over the freshest window.
// Gate halts publish nothing; the prior version stays live.
std::vector<TableVersion> run_schedule(std::span<const ingest::EventBatch> days,
                                       const ScheduleConfig& cfg,
                                       const core::ClusterVocabulary& vocab,
                                       const BackendFactory& backend_factory,
                                       serve::TableStore* store = nullptr,
                                       ScheduleTrace* trace = nullptr);

}  // namespace driftflow::pipeline
