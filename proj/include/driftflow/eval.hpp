#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftflow/core.hpp"
#include "driftflow/generation.hpp"
#include "driftflow/pipeline.hpp"
#include "driftflow/serve.hpp"
#include "driftflow/stats.hpp"

namespace driftflow::eval {

struct EmptyEvalError : core::Error {
    using core::Error::Error;
};

struct AlignmentError : core::Error {
    using core::Error::Error;
};

enum class EvalMode { strict_next, window_n };

std::string to_string(EvalMode m);
EvalMode eval_mode_from_string(const std::string& s);

struct EvalConfig {
    EvalMode mode = EvalMode::strict_next;
    int horizon = 1;  // window_n only
};

struct HitRateResult {
    double rate = 0.0;
    std::int64_t sample_count = 0;
};

// Judgment per adjacent pair occurrence with at least one subsequent
// element: 1 when the table's prediction is the next cluster (strict) or
// appears within the horizon (window_n). Lookup misses judge 0.
HitRateResult hit_rate(const pipeline::TableVersion& table,
                       std::span<const core::WatchSequence> sequences, const EvalConfig& cfg,
                       const serve::Fallback& fallback);

// Fraction of aligned positions whose resolved predictions are present and
// equal. Both traces must carry the same ordered pair set.
double output_overlap(std::span<const generation::GenerationRecord> a,
                      std::span<const generation::GenerationRecord> b);

struct IdentityPoint {
    int window_id = 0;
    std::optional<double> rate;  // absent when no pair is shared with base
};

// Per later window, mean |top_k(base) n top_k(later)| / k_top over pairs
// present in both windows.
std::vector<IdentityPoint> topk_identity_rate(const stats::FrequencyWindow& base,
                                              std::span<const stats::FrequencyWindow> later,
                                              int k_top);

struct SeriesPoint {
    int day = 0;
    std::string variant;
    std::int64_t version_id = 0;
    double hit_rate = 0.0;
    std::int64_t sample_count = 0;
};

struct EvalReport {
    std::string mode;
    std::vector<SeriesPoint> series;
};

}  // namespace driftflow::eval
