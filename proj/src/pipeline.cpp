#include "driftflow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "driftflow/serve.hpp"

namespace driftflow::pipeline {

std::string to_string(Provenance p) {
    return p == Provenance::finetune ? "finetune" : "rag";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "finetune") return Provenance::finetune;
    if (s == "rag") return Provenance::rag;
    throw core::Error("unknown provenance '" + s + "'");
}

std::vector<core::PairKey> enumerate_pairs(const stats::FrequencyWindow& w,
                                           std::int64_t min_support) {
    std::vector<core::PairKey> pairs;
    for (const auto& [pair, successors] : w.counts) {
        std::int64_t total = 0;
        for (const auto& [next, count] : successors) total += count;
        if (total >= min_support) pairs.push_back(pair);
    }
    return pairs;  // map order: (first, second) ascending
}

namespace {

generation::GenerationRecord generate_one(const generation::GeneratorBackend& backend,
                                          const core::PairKey& pair,
                                          const stats::FrequencyWindow& recent,
                                          const stats::FrequencyWindow* previous,
                                          const ScheduleConfig& cfg,
                                          const core::ClusterVocabulary& vocab, bool use_rag) {
    generation::PromptInstance prompt;
    if (use_rag) {
        retrieval::RetrievalQuery query{pair, cfg.retrieval.mode, cfg.retrieval.n};
        prompt = generation::render_rag_prompt(
            pair, retrieval::retrieve_instance(recent, previous, query), vocab);
    } else {
        prompt = generation::render_inference_prompt(pair, vocab);
    }

    std::string raw;
    int attempt = 0;
    for (;;) {
        try {
            raw = backend.generate(prompt, cfg.seed);
            break;
        } catch (const std::exception& e) {
            if (++attempt > cfg.max_retries)
                throw BuildError("backend failed for pair (" + pair.first.value() + ", " +
                                 pair.second.value() + "): " + e.what());
        }
    }

    generation::GenerationRecord record;
    record.pair = pair;
    record.raw = raw;
    record.resolved = generation::resolve_prediction(raw, vocab);
    record.variant = prompt.variant;
    return record;
}

}  // namespace

BuildOutput build_table(const generation::GeneratorBackend& backend,
                        std::span<const core::PairKey> pairs,
                        const stats::FrequencyWindow& recent,
                        const stats::FrequencyWindow* previous, const ScheduleConfig& cfg,
                        const core::ClusterVocabulary& vocab, bool use_rag,
                        std::span<const core::TransitionTriple> test_triples,
                        std::int64_t version_id, int created_day) {
    if (pairs.empty()) throw BuildError("build_table requires a non-empty pair set");

    std::vector<generation::GenerationRecord> records(pairs.size());
    const int workers = std::max(1, std::min<int>(cfg.parallelism,
                                                  static_cast<int>(pairs.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i)
            records[i] = generate_one(backend, pairs[i], recent, previous, cfg, vocab, use_rag);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::mutex error_mutex;
        std::exception_ptr error;
        auto work = [&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= pairs.size()) return;
                try {
                    records[i] =
                        generate_one(backend, pairs[i], recent, previous, cfg, vocab, use_rag);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    cursor.store(pairs.size());
                    return;
                }
            }
        };
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) threads.emplace_back(work);
        for (std::thread& t : threads) t.join();
        if (error) std::rethrow_exception(error);
    }

    BuildOutput out;
    out.table.version_id = version_id;
    out.table.created_day = created_day;
    out.table.provenance = use_rag ? Provenance::rag : Provenance::finetune;
    out.table.template_version = generation::kTemplateVersion;

    std::int64_t unresolved = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].resolved)
            out.table.entries.emplace(pairs[i], *records[i].resolved);
        else
            ++unresolved;
    }

    QualityGateReport report;
    report.prompts_issued = static_cast<std::int64_t>(pairs.size());
    report.unresolved = unresolved;
    report.exact_match_rate =
        1.0 - static_cast<double>(unresolved) / static_cast<double>(pairs.size());
    std::int64_t hits = 0;
    for (const core::TransitionTriple& t : test_triples) {
        auto it = out.table.entries.find(t.pair);
        if (it != out.table.entries.end() && it->second == t.next) ++hits;
    }
    report.test_recall = test_triples.empty()
                             ? 0.0
                             : static_cast<double>(hits) / static_cast<double>(test_triples.size());

    out.table.gate_report = report;
    out.report = report;
    out.records = std::move(records);
    return out;
}

GateDecision apply_quality_gates(const QualityGateReport& report, const ScheduleConfig& cfg) {
    std::ostringstream reason;
    if (report.exact_match_rate < cfg.gates.exact_match_min) {
        reason << "exact_match gate: rate " << report.exact_match_rate << " below "
               << cfg.gates.exact_match_min;
        return {false, reason.str()};
    }
    if (report.test_recall < cfg.gates.recall_min) {
        reason << "recall gate: recall " << report.test_recall << " below "
               << cfg.gates.recall_min;
        return {false, reason.str()};
    }
    return {true, ""};
}

generation::SnapshotMapping snapshot_from_window(const stats::FrequencyWindow& w,
                                                 const core::ClusterVocabulary& vocab) {
    generation::SnapshotMapping snapshot;
    std::map<core::ClusterId, std::int64_t> successor_totals;
    for (const auto& [pair, successors] : w.counts) {
        const stats::TopKSet top = stats::top_successors(w, pair, 1);
        if (!top.members.empty()) snapshot.entries.emplace(pair, top.members.front());
        for (const auto& [next, count] : successors) successor_totals[next] += count;
    }
    if (!successor_totals.empty()) {
        auto best = successor_totals.begin();
        for (auto it = successor_totals.begin(); it != successor_totals.end(); ++it)
            if (it->second > best->second) best = it;
        snapshot.default_cluster = best->first;
    } else if (!vocab.clusters().empty()) {
        snapshot.default_cluster = vocab.clusters().front().id;
    }
    return snapshot;
}

std::vector<TableVersion> run_schedule(std::span<const ingest::EventBatch> days,
                                       const ScheduleConfig& cfg,
                                       const core::ClusterVocabulary& vocab,
                                       const BackendFactory& backend_factory,
                                       serve::TableStore* store, ScheduleTrace* trace) {
    if (cfg.finetune_period_days < 1 || cfg.rag_period_days < 1)
        throw core::Error("schedule periods must be positive");
    if (cfg.rag_period_days > cfg.finetune_period_days)
        throw core::Error("rag period must not exceed finetune period");

    std::vector<stats::FrequencyWindow> day_windows;
    std::vector<std::vector<core::TransitionTriple>> day_triples;
    std::vector<TableVersion> published;
    generation::SnapshotMapping snapshot;
    bool have_snapshot = false;
    std::int64_t next_version = 1;

    auto merge_trailing = [&](int day, int span_days) {
        const int from = std::max(0, day - span_days + 1);
        return stats::merge_windows(
            std::span<const stats::FrequencyWindow>(day_windows.data() + from,
                                                    static_cast<std::size_t>(day - from + 1)),
            day);
    };
    auto record = [&](ScheduleEvent event) {
        if (trace != nullptr) trace->events.push_back(std::move(event));
    };

    for (int day = 0; day < static_cast<int>(days.size()); ++day) {
        std::vector<core::TransitionTriple> triples =
            ingest::extract_batch_triples(days[static_cast<std::size_t>(day)], vocab);
        day_windows.push_back(
            stats::count_transitions(std::span<const core::TransitionTriple>(triples), day));
        day_triples.push_back(std::move(triples));

        const bool finetune_day = day % cfg.finetune_period_days == 0;
        const bool rag_day = !finetune_day && day % cfg.rag_period_days == 0;
        if (!finetune_day && !rag_day) continue;

        const Provenance provenance = finetune_day ? Provenance::finetune : Provenance::rag;
        stats::FrequencyWindow recent;
        stats::FrequencyWindow baseline;
        const stats::FrequencyWindow* previous = nullptr;
        bool use_rag = false;
        generation::SnapshotMapping candidate_snapshot;

        if (finetune_day) {
            recent = merge_trailing(day, cfg.finetune_period_days);
            candidate_snapshot = snapshot_from_window(recent, vocab);
        } else {
            recent = merge_trailing(day, cfg.rag_period_days);
            if (day - cfg.rag_period_days >= 0) {
                baseline = merge_trailing(day - cfg.rag_period_days, cfg.rag_period_days);
                previous = &baseline;
            }
            use_rag = true;
            if (!have_snapshot) {
                record({day, provenance, false, 0, "no snapshot available"});
                continue;
            }
        }

        std::vector<core::PairKey> pairs = enumerate_pairs(recent, cfg.min_support);
        if (pairs.empty()) {
            record({day, provenance, false, 0, "no pairs at min_support"});
            continue;
        }

        const generation::SnapshotMapping& build_snapshot =
            finetune_day ? candidate_snapshot : snapshot;
        std::unique_ptr<generation::GeneratorBackend> backend =
            backend_factory(day, build_snapshot);
        ScheduleConfig day_cfg = cfg;
        day_cfg.seed = core::mix_seed(cfg.seed, static_cast<std::uint64_t>(day));
        BuildOutput out = build_table(*backend, pairs, recent, previous, day_cfg, vocab, use_rag,
                                      day_triples.back(), next_version, day);

        const GateDecision decision = apply_quality_gates(out.report, cfg);
        if (!decision.passed) {
            // halted fine-tune: the snapshot is not re-baselined either
            record({day, provenance, false, 0, decision.reason});
            continue;
        }
        if (finetune_day) {
            snapshot = candidate_snapshot;
            have_snapshot = true;
        }
        if (store != nullptr) store->publish(out.table);
        record({day, provenance, true, next_version, ""});
        published.push_back(std::move(out.table));
        ++next_version;
    }
    return published;
}

}  // namespace driftflow::pipeline
