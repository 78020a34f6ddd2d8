#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "driftflow/core.hpp"
#include "driftflow/eval.hpp"
#include "driftflow/generation.hpp"
#include "driftflow/ingest.hpp"
#include "driftflow/pipeline.hpp"
#include "driftflow/stats.hpp"
#include "driftflow/synth.hpp"

namespace driftflow::jsonio {

struct IoError : core::Error {
    using core::Error::Error;
};

// ---- vocabulary: one {id, description, keywords:[...]} object per line
core::ClusterVocabulary read_vocabulary(const std::filesystem::path& path, int k = 2);
void write_vocabulary(const std::filesystem::path& path, const core::ClusterVocabulary& vocab);

// ---- events: {user_id, timestamp, cluster_id, positive} per line
ingest::EventBatch read_events(const std::filesystem::path& path, int day);
void write_events(const std::filesystem::path& path, const ingest::EventBatch& batch);

// ---- triples: {first, second, next, day} per line
std::vector<core::TransitionTriple> read_triples(const std::filesystem::path& path);
void write_triples(const std::filesystem::path& path,
                   const std::vector<core::TransitionTriple>& triples, int day);

// ---- counts: {window_id, first, second, next, count} per line; a file may
// carry several windows
std::vector<stats::FrequencyWindow> read_count_windows(const std::filesystem::path& path);
stats::FrequencyWindow read_counts(const std::filesystem::path& path);  // exactly one window
void write_counts(const std::filesystem::path& path, const stats::FrequencyWindow& window);

// ---- table: header line {version_id, created_day, provenance,
// template_version, gate_report}, then {first, second, next} per line,
// pair ascending
std::string table_to_string(const pipeline::TableVersion& table);
pipeline::TableVersion table_from_string(const std::string& text);
pipeline::TableVersion read_table(const std::filesystem::path& path);
void write_table(const std::filesystem::path& path, const pipeline::TableVersion& table);

// ---- generation trace: {first, second, raw, resolved, variant} per line
std::vector<generation::GenerationRecord> read_trace(const std::filesystem::path& path);
void write_trace(const std::filesystem::path& path,
                 const std::vector<generation::GenerationRecord>& records);

// ---- reports
void write_drift_report(const std::filesystem::path& path, const stats::DriftReport& report,
                        int k_top);
void write_identity_report(const std::filesystem::path& path,
                           const std::vector<std::pair<int, std::vector<eval::IdentityPoint>>>&
                               series_by_k);
void write_eval_report(const std::filesystem::path& path, const eval::EvalReport& report);
void write_eval_csv(const std::filesystem::path& path, const eval::EvalReport& report);

// ---- pipeline config file: ScheduleConfig fields plus backend selection
struct PipelineConfig {
    pipeline::ScheduleConfig schedule;
    generation::BackendConfig backend;
};

PipelineConfig read_pipeline_config(const std::filesystem::path& path);
void write_pipeline_config(const std::filesystem::path& path, const PipelineConfig& config);

// ---- synthetic ground truth
void write_truth(const std::filesystem::path& path, const synth::SynthDataset& dataset);

// ---- schedule trace
void write_schedule_trace(const std::filesystem::path& path, const pipeline::ScheduleTrace& trace);

}  // namespace driftflow::jsonio
