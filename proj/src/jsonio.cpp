#include "driftflow/jsonio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace driftflow::jsonio {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

json parse_line(const std::string& line, const std::filesystem::path& path, std::size_t lineno) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
        throw IoError("invalid JSON at " + path.string() + ":" + std::to_string(lineno));
    return j;
}

// Applies fn to every non-empty line.
template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        fn(parse_line(line, path, lineno), lineno);
    }
}

core::PairKey pair_from(const json& j) {
    return core::PairKey(core::ClusterId::of(j.at("first").get<std::string>()),
                         core::ClusterId::of(j.at("second").get<std::string>()));
}

json gate_report_to_json(const pipeline::QualityGateReport& r) {
    return json{{"exact_match_rate", r.exact_match_rate},
                {"test_recall", r.test_recall},
                {"prompts_issued", r.prompts_issued},
                {"unresolved", r.unresolved}};
}

pipeline::QualityGateReport gate_report_from_json(const json& j) {
    pipeline::QualityGateReport r;
    r.exact_match_rate = j.at("exact_match_rate").get<double>();
    r.test_recall = j.at("test_recall").get<double>();
    r.prompts_issued = j.at("prompts_issued").get<std::int64_t>();
    r.unresolved = j.at("unresolved").get<std::int64_t>();
    return r;
}

}  // namespace

core::ClusterVocabulary read_vocabulary(const std::filesystem::path& path, int k) {
    std::vector<core::Cluster> clusters;
    for_each_line(path, [&](const json& j, std::size_t) {
        core::Cluster c;
        c.id = core::ClusterId::of(j.at("id").get<std::string>());
        c.description = j.at("description").get<std::string>();
        for (const auto& kw : j.at("keywords")) c.keywords.push_back(kw.get<std::string>());
        clusters.push_back(std::move(c));
    });
    return core::ClusterVocabulary(std::move(clusters), k);
}

void write_vocabulary(const std::filesystem::path& path, const core::ClusterVocabulary& vocab) {
    std::ofstream out = open_out(path);
    for (const core::Cluster& c : vocab.clusters()) {
        json j{{"id", c.id.value()}, {"description", c.description}, {"keywords", c.keywords}};
        out << j.dump() << '\n';
    }
}

ingest::EventBatch read_events(const std::filesystem::path& path, int day) {
    ingest::EventBatch batch;
    batch.source_day = day;
    for_each_line(path, [&](const json& j, std::size_t lineno) {
        core::InteractionEvent ev;
        ev.user_id = j.at("user_id").get<std::string>();
        ev.timestamp = j.at("timestamp").get<std::int64_t>();
        if (ev.timestamp < 0)
            throw IoError("negative timestamp at " + path.string() + ":" + std::to_string(lineno));
        ev.cluster_id = core::ClusterId::of(j.at("cluster_id").get<std::string>());
        ev.positive = j.at("positive").get<bool>();
        batch.events.push_back(std::move(ev));
    });
    return batch;
}

void write_events(const std::filesystem::path& path, const ingest::EventBatch& batch) {
    std::ofstream out = open_out(path);
    for (const core::InteractionEvent& ev : batch.events) {
        json j{{"user_id", ev.user_id},
               {"timestamp", ev.timestamp},
               {"cluster_id", ev.cluster_id.value()},
               {"positive", ev.positive}};
        out << j.dump() << '\n';
    }
}

std::vector<core::TransitionTriple> read_triples(const std::filesystem::path& path) {
    std::vector<core::TransitionTriple> triples;
    for_each_line(path, [&](const json& j, std::size_t) {
        triples.emplace_back(pair_from(j), core::ClusterId::of(j.at("next").get<std::string>()));
    });
    return triples;
}

void write_triples(const std::filesystem::path& path,
                   const std::vector<core::TransitionTriple>& triples, int day) {
    std::ofstream out = open_out(path);
    for (const core::TransitionTriple& t : triples) {
        json j{{"first", t.pair.first.value()},
               {"second", t.pair.second.value()},
               {"next", t.next.value()},
               {"day", day}};
        out << j.dump() << '\n';
    }
}

std::vector<stats::FrequencyWindow> read_count_windows(const std::filesystem::path& path) {
    std::map<int, stats::FrequencyWindow> windows;
    for_each_line(path, [&](const json& j, std::size_t lineno) {
        const int window_id = j.at("window_id").get<int>();
        const std::int64_t count = j.at("count").get<std::int64_t>();
        if (count <= 0)
            throw IoError("non-positive count at " + path.string() + ":" + std::to_string(lineno));
        stats::FrequencyWindow& w = windows[window_id];
        w.window_id = window_id;
        w.add(pair_from(j), core::ClusterId::of(j.at("next").get<std::string>()), count);
    });
    std::vector<stats::FrequencyWindow> out;
    out.reserve(windows.size());
    for (auto& [id, w] : windows) out.push_back(std::move(w));
    return out;
}

stats::FrequencyWindow read_counts(const std::filesystem::path& path) {
    std::vector<stats::FrequencyWindow> windows = read_count_windows(path);
    if (windows.size() != 1)
        throw IoError("expected exactly one window in '" + path.string() + "', found " +
                      std::to_string(windows.size()));
    return std::move(windows.front());
}

void write_counts(const std::filesystem::path& path, const stats::FrequencyWindow& window) {
    std::ofstream out = open_out(path);
    for (const auto& [pair, successors] : window.counts)
        for (const auto& [next, count] : successors) {
            json j{{"window_id", window.window_id},
                   {"first", pair.first.value()},
                   {"second", pair.second.value()},
                   {"next", next.value()},
                   {"count", count}};
            out << j.dump() << '\n';
        }
}

std::string table_to_string(const pipeline::TableVersion& table) {
    std::ostringstream out;
    json header{{"version_id", table.version_id},
                {"created_day", table.created_day},
                {"provenance", pipeline::to_string(table.provenance)},
                {"template_version", table.template_version},
                {"gate_report", gate_report_to_json(table.gate_report)}};
    out << header.dump() << '\n';
    std::vector<std::pair<core::PairKey, core::ClusterId>> entries(table.entries.begin(),
                                                                   table.entries.end());
    std::sort(entries.begin(), entries.end());
    for (const auto& [pair, next] : entries) {
        json j{{"first", pair.first.value()},
               {"second", pair.second.value()},
               {"next", next.value()}};
        out << j.dump() << '\n';
    }
    return out.str();
}

pipeline::TableVersion table_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    pipeline::TableVersion table;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (!have_header) {
            table.version_id = j.at("version_id").get<std::int64_t>();
            table.created_day = j.at("created_day").get<int>();
            table.provenance = pipeline::provenance_from_string(j.at("provenance").get<std::string>());
            table.template_version = j.at("template_version").get<std::string>();
            table.gate_report = gate_report_from_json(j.at("gate_report"));
            have_header = true;
            continue;
        }
        table.entries.emplace(pair_from(j), core::ClusterId::of(j.at("next").get<std::string>()));
    }
    if (!have_header) throw IoError("table text has no header line");
    return table;
}

pipeline::TableVersion read_table(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return table_from_string(buffer.str());
    } catch (const json::exception& e) {
        throw IoError("invalid table file '" + path.string() + "': " + e.what());
    }
}

void write_table(const std::filesystem::path& path, const pipeline::TableVersion& table) {
    std::ofstream out = open_out(path);
    out << table_to_string(table);
}

std::vector<generation::GenerationRecord> read_trace(const std::filesystem::path& path) {
    std::vector<generation::GenerationRecord> records;
    for_each_line(path, [&](const json& j, std::size_t) {
        generation::GenerationRecord r;
        r.pair = pair_from(j);
        r.raw = j.at("raw").get<std::string>();
        if (!j.at("resolved").is_null())
            r.resolved = core::ClusterId::of(j.at("resolved").get<std::string>());
        r.variant = generation::prompt_variant_from_string(j.at("variant").get<std::string>());
        records.push_back(std::move(r));
    });
    return records;
}

void write_trace(const std::filesystem::path& path,
                 const std::vector<generation::GenerationRecord>& records) {
    std::ofstream out = open_out(path);
    for (const generation::GenerationRecord& r : records) {
        json j{{"first", r.pair.first.value()},
               {"second", r.pair.second.value()},
               {"raw", r.raw},
               {"resolved", r.resolved ? json(r.resolved->value()) : json(nullptr)},
               {"variant", generation::to_string(r.variant)}};
        out << j.dump() << '\n';
    }
}

void write_drift_report(const std::filesystem::path& path, const stats::DriftReport& report,
                        int k_top) {
    json periods = json::array();
    for (const stats::PeriodScore& p : report.per_transition_scores)
        periods.push_back(json{{"from_window", p.from_window},
                               {"to_window", p.to_window},
                               {"score", p.score ? json(*p.score) : json(nullptr)}});
    json j{{"k_top", k_top},
           {"periods", periods},
           {"mean", report.mean ? json(*report.mean) : json(nullptr)},
           {"variance", report.variance ? json(*report.variance) : json(nullptr)}};
    open_out(path) << j.dump(2) << '\n';
}

void write_identity_report(
    const std::filesystem::path& path,
    const std::vector<std::pair<int, std::vector<eval::IdentityPoint>>>& series_by_k) {
    json series = json::array();
    for (const auto& [k_top, points] : series_by_k) {
        json pts = json::array();
        for (const eval::IdentityPoint& p : points)
            pts.push_back(json{{"window_id", p.window_id},
                               {"rate", p.rate ? json(*p.rate) : json(nullptr)}});
        series.push_back(json{{"k_top", k_top}, {"points", pts}});
    }
    open_out(path) << json{{"series", series}}.dump(2) << '\n';
}

void write_eval_report(const std::filesystem::path& path, const eval::EvalReport& report) {
    json series = json::array();
    for (const eval::SeriesPoint& p : report.series)
        series.push_back(json{{"day", p.day},
                              {"variant", p.variant},
                              {"version_id", p.version_id},
                              {"hit_rate", p.hit_rate},
                              {"sample_count", p.sample_count}});
    open_out(path) << json{{"mode", report.mode}, {"series", series}}.dump(2) << '\n';
}

void write_eval_csv(const std::filesystem::path& path, const eval::EvalReport& report) {
    std::ofstream out = open_out(path);
    out << "day,variant,hit_rate\n";
    for (const eval::SeriesPoint& p : report.series)
        out << p.day << ',' << p.variant << ',' << p.hit_rate << '\n';
}

PipelineConfig read_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("invalid config '" + path.string() + "': " + e.what());
    }
    PipelineConfig config;
    pipeline::ScheduleConfig& s = config.schedule;
    s.finetune_period_days = j.value("finetune_period_days", s.finetune_period_days);
    s.rag_period_days = j.value("rag_period_days", s.rag_period_days);
    if (j.contains("retrieval")) {
        const json& r = j.at("retrieval");
        s.retrieval.mode =
            retrieval::retrieval_mode_from_string(r.value("mode", std::string("frequency")));
        s.retrieval.n = r.value("n", s.retrieval.n);
    }
    if (j.contains("gates")) {
        const json& g = j.at("gates");
        s.gates.exact_match_min = g.value("exact_match_min", s.gates.exact_match_min);
        s.gates.recall_min = g.value("recall_min", s.gates.recall_min);
    }
    s.min_support = j.value("min_support", s.min_support);
    s.parallelism = j.value("parallelism", s.parallelism);
    s.seed = j.value("seed", s.seed);
    s.max_retries = j.value("max_retries", s.max_retries);
    if (j.contains("backend")) {
        const json& b = j.at("backend");
        config.backend.name = b.value("name", config.backend.name);
        config.backend.p = b.value("p", config.backend.p);
        config.backend.q = b.value("q", config.backend.q);
        config.backend.inner = b.value("inner", config.backend.inner);
    }
    return config;
}

void write_pipeline_config(const std::filesystem::path& path, const PipelineConfig& config) {
    const pipeline::ScheduleConfig& s = config.schedule;
    json j{{"finetune_period_days", s.finetune_period_days},
           {"rag_period_days", s.rag_period_days},
           {"retrieval",
            json{{"mode", retrieval::to_string(s.retrieval.mode)}, {"n", s.retrieval.n}}},
           {"gates",
            json{{"exact_match_min", s.gates.exact_match_min},
                 {"recall_min", s.gates.recall_min}}},
           {"min_support", s.min_support},
           {"parallelism", s.parallelism},
           {"seed", s.seed},
           {"max_retries", s.max_retries},
           {"backend",
            json{{"name", config.backend.name},
                 {"p", config.backend.p},
                 {"q", config.backend.q},
                 {"inner", config.backend.inner}}}};
    open_out(path) << j.dump(2) << '\n';
}

void write_truth(const std::filesystem::path& path, const synth::SynthDataset& dataset) {
    json periods = json::array();
    for (const synth::DriftModel& m : dataset.truth) {
        json weights = json::array();
        for (const auto& [pair, w] : m.pair_weights)
            weights.push_back(
                json{{"first", pair.first.value()}, {"second", pair.second.value()}, {"weight", w}});
        json successors = json::array();
        for (const auto& [pair, dist] : m.successor_dist) {
            json d = json::array();
            for (const auto& [id, p] : dist) d.push_back(json{{"next", id.value()}, {"p", p}});
            successors.push_back(json{
                {"first", pair.first.value()}, {"second", pair.second.value()}, {"dist", d}});
        }
        periods.push_back(json{{"period", m.period},
                               {"pair_weights", weights},
                               {"successors", successors}});
    }
    const synth::DriftModel& first = dataset.truth.front();
    json j{{"alpha", first.concentration},
           {"drift_rate", first.drift_rate},
           {"seed", first.seed},
           {"periods", periods}};
    open_out(path) << j.dump() << '\n';
}

void write_schedule_trace(const std::filesystem::path& path,
                          const pipeline::ScheduleTrace& trace) {
    json events = json::array();
    for (const pipeline::ScheduleEvent& e : trace.events)
        events.push_back(json{{"day", e.day},
                              {"provenance", pipeline::to_string(e.provenance)},
                              {"published", e.published},
                              {"version_id", e.version_id},
                              {"halt_reason", e.halt_reason}});
    open_out(path) << json{{"events", events}}.dump(2) << '\n';
}

}  // namespace driftflow::jsonio
