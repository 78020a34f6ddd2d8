#include "driftflow/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

namespace driftflow::synth {

namespace {

std::vector<double> dirichlet(std::mt19937_64& rng, double alpha, std::size_t size) {
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> draw(size);
    double sum = 0.0;
    for (double& x : draw) {
        x = gamma(rng);
        sum += x;
    }
    if (sum <= 0.0) {  // all-underflow corner: fall back to uniform
        std::fill(draw.begin(), draw.end(), 1.0 / static_cast<double>(size));
        return draw;
    }
    for (double& x : draw) x /= sum;
    return draw;
}

std::vector<core::PairKey> all_pairs(const core::ClusterVocabulary& vocab) {
    std::vector<core::ClusterId> ids;
    ids.reserve(vocab.size());
    for (const core::Cluster& c : vocab.clusters()) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());
    std::vector<core::PairKey> pairs;
    pairs.reserve(ids.size() * (ids.size() - 1));
    for (const core::ClusterId& a : ids)
        for (const core::ClusterId& b : ids)
            if (a != b) pairs.emplace_back(a, b);
    return pairs;
}

std::vector<core::ClusterId> admissible_successors(const core::ClusterVocabulary& vocab,
                                                   const core::PairKey& pair) {
    std::vector<core::ClusterId> out;
    out.reserve(vocab.size());
    for (const core::Cluster& c : vocab.clusters())
        if (c.id != pair.first && c.id != pair.second) out.push_back(c.id);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t sample_index(const std::vector<double>& cumulative, double u) {
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) return cumulative.size() - 1;
    return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace

DriftModel sample_model(const core::ClusterVocabulary& vocab, double alpha, std::uint64_t seed,
                        double drift_rate) {
    if (vocab.size() < 3)
        throw ModelError("drift model needs at least 3 clusters, got " +
                         std::to_string(vocab.size()));
    if (alpha <= 0.0) throw ModelError("concentration must be positive");
    if (drift_rate < 0.0 || drift_rate > 1.0) throw ModelError("drift rate must be in [0, 1]");

    DriftModel m;
    m.vocab = vocab;
    m.drift_rate = drift_rate;
    m.concentration = alpha;
    m.seed = seed;
    m.period = 0;

    std::mt19937_64 rng(core::mix_seed(seed, 0x6d6f64656cull));
    const std::vector<core::PairKey> pairs = all_pairs(vocab);
    const std::vector<double> weights = dirichlet(rng, alpha, pairs.size());
    m.pair_weights.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) m.pair_weights.emplace_back(pairs[i], weights[i]);

    for (const core::PairKey& pair : pairs) {
        const std::vector<core::ClusterId> successors = admissible_successors(vocab, pair);
        const std::vector<double> probs = dirichlet(rng, alpha, successors.size());
        std::vector<std::pair<core::ClusterId, double>> dist;
        dist.reserve(successors.size());
        for (std::size_t i = 0; i < successors.size(); ++i)
            dist.emplace_back(successors[i], probs[i]);
        m.successor_dist.emplace(pair, std::move(dist));
    }
    return m;
}

std::vector<double> blend_distributions(const std::vector<double>& p, const std::vector<double>& q,
                                        double delta) {
    if (p.size() != q.size()) throw ModelError("blend requires equal supports");
    std::vector<double> out(p.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] = (1.0 - delta) * p[i] + delta * q[i];
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
}

DriftModel advance_model(const DriftModel& m) {
    DriftModel next = m;
    next.period = m.period + 1;
    if (m.drift_rate == 0.0) return next;

    std::mt19937_64 rng(
        core::mix_seed(m.seed, 0x6472696674ull ^ static_cast<std::uint64_t>(next.period)));
    for (auto& [pair, dist] : next.successor_dist) {
        std::vector<double> p(dist.size());
        for (std::size_t i = 0; i < dist.size(); ++i) p[i] = dist[i].second;
        const std::vector<double> q = dirichlet(rng, m.concentration, dist.size());
        const std::vector<double> blended = blend_distributions(p, q, m.drift_rate);
        for (std::size_t i = 0; i < dist.size(); ++i) dist[i].second = blended[i];
    }
    return next;
}

ingest::EventBatch simulate_period(const DriftModel& m, int users, int events_per_user, int day) {
    if (users < 1) throw ModelError("users must be >= 1");
    if (events_per_user < 3) throw ModelError("events_per_user must be >= 3");

    std::vector<double> weight_cdf;
    weight_cdf.reserve(m.pair_weights.size());
    double acc = 0.0;
    for (const auto& [pair, w] : m.pair_weights) {
        acc += w;
        weight_cdf.push_back(acc);
    }
    std::map<core::PairKey, std::vector<double>> successor_cdf;
    for (const auto& [pair, dist] : m.successor_dist) {
        std::vector<double> cdf;
        cdf.reserve(dist.size());
        double s = 0.0;
        for (const auto& [id, p] : dist) {
            s += p;
            cdf.push_back(s);
        }
        successor_cdf.emplace(pair, std::move(cdf));
    }

    ingest::EventBatch batch;
    batch.source_day = day;
    batch.events.reserve(static_cast<std::size_t>(users) *
                         static_cast<std::size_t>(events_per_user));
    const std::uint64_t day_seed = core::mix_seed(m.seed, 0x73696d00ull + static_cast<std::uint64_t>(day));
    char name[16];

    for (int u = 0; u < users; ++u) {
        std::mt19937_64 rng(core::mix_seed(day_seed, static_cast<std::uint64_t>(u)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::snprintf(name, sizeof(name), "u%06d", u);
        const std::string user_id(name);

        const core::PairKey start = m.pair_weights[sample_index(weight_cdf, unit(rng))].first;
        std::vector<core::ClusterId> walk{start.first, start.second};
        core::PairKey current = start;
        while (static_cast<int>(walk.size()) < events_per_user) {
            const auto& dist = m.successor_dist.at(current);
            const auto& cdf = successor_cdf.at(current);
            const core::ClusterId next = dist[sample_index(cdf, unit(rng))].first;
            walk.push_back(next);
            current = core::PairKey(current.second, next);
        }

        const std::int64_t base_t = static_cast<std::int64_t>(day) * 1000000;
        for (std::size_t step = 0; step < walk.size(); ++step)
            batch.events.push_back(
                {user_id, base_t + static_cast<std::int64_t>(step), walk[step], true});
    }
    return batch;
}

pipeline::TableVersion oracle_table(const DriftModel& m) {
    pipeline::TableVersion table;
    table.version_id = 0;
    table.created_day = m.period;
    table.provenance = pipeline::Provenance::finetune;
    table.template_version = "oracle";
    table.gate_report = {1.0, 1.0, 0, 0};
    for (const auto& [pair, dist] : m.successor_dist) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < dist.size(); ++i)
            if (dist[i].second > dist[best].second) best = i;  // ties keep the lowest id
        table.entries.emplace(pair, dist[best].first);
    }
    return table;
}

double oracle_hit_rate(const DriftModel& m) {
    double expected = 0.0;
    for (const auto& [pair, weight] : m.pair_weights) {
        const auto& dist = m.successor_dist.at(pair);
        double best = 0.0;
        for (const auto& [id, p] : dist) best = std::max(best, p);
        expected += weight * best;
    }
    return expected;
}

SynthDataset generate_dataset(const core::ClusterVocabulary& vocab, double alpha, double drift,
                              int users, int events_per_user, int days, std::uint64_t seed) {
    if (days < 1) throw ModelError("days must be >= 1");
    SynthDataset dataset;
    DriftModel m = sample_model(vocab, alpha, seed, drift);
    for (int day = 0; day < days; ++day) {
        dataset.batches.push_back(simulate_period(m, users, events_per_user, day));
        dataset.truth.push_back(m);
        if (day + 1 < days) m = advance_model(m);
    }
    return dataset;
}

core::ClusterVocabulary make_synthetic_vocabulary(int n_clusters) {
    if (n_clusters < 1) throw ModelError("need at least one cluster");
    std::vector<core::Cluster> clusters;
    clusters.reserve(static_cast<std::size_t>(n_clusters));
    char buf[32];
    for (int i = 0; i < n_clusters; ++i) {
        std::snprintf(buf, sizeof(buf), "%03d", i);
        const std::string tag(buf);
        core::Cluster c;
        c.id = core::ClusterId::of("c" + tag);
        c.description = "interest " + tag;
        c.keywords = {"topic " + tag, "theme " + tag};
        clusters.push_back(std::move(c));
    }
    return core::ClusterVocabulary(std::move(clusters));
}

}  // namespace driftflow::synth
