#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "driftflow/core.hpp"
#include "driftflow/ingest.hpp"
#include "driftflow/pipeline.hpp"

namespace driftflow::synth {

struct ModelError : core::Error {
    using core::Error::Error;
};

// Ground-truth time-varying successor distributions. Successor support
// excludes both elements of the pair, so emitted walks stay
// adjacent-distinct end to end.
struct DriftModel {
    core::ClusterVocabulary vocab;
    std::vector<std::pair<core::PairKey, double>> pair_weights;  // pair ascending, sums to 1
    std::map<core::PairKey, std::vector<std::pair<core::ClusterId, double>>> successor_dist;
    double drift_rate = 0.0;     // delta in [0, 1]
    double concentration = 1.0;  // alpha > 0
    std::uint64_t seed = 0;
    int period = 0;
};

// Symmetric Dirichlet draws per pair (successors) and across pairs
// (weights); deterministic in seed. Needs at least 3 clusters.
DriftModel sample_model(const core::ClusterVocabulary& vocab, double alpha, std::uint64_t seed,
                        double drift_rate = 0.0);

// Per pair: p' = (1-delta) p + delta q with q a fresh draw keyed by
// (seed, period). delta=0 leaves the model unchanged, delta=1 redraws it.
DriftModel advance_model(const DriftModel& m);

// (1-delta) p + delta q, renormalized. Shared by advance_model and tests.
std::vector<double> blend_distributions(const std::vector<double>& p, const std::vector<double>& q,
                                        double delta);

// Per user: initial pair from pair_weights, then a successor walk. All
// events positive; deterministic in (seed, day, user index).
ingest::EventBatch simulate_period(const DriftModel& m, int users, int events_per_user, int day);

// argmax prediction per pair (ties to the ascending id).
pipeline::TableVersion oracle_table(const DriftModel& m);

// Expected strict-next hit rate of oracle_table when judged pairs follow
// pair_weights: sum of pair_weight x max successor probability.
double oracle_hit_rate(const DriftModel& m);

struct SynthDataset {
    std::vector<ingest::EventBatch> batches;
    std::vector<DriftModel> truth;  // model in effect for each day
};

SynthDataset generate_dataset(const core::ClusterVocabulary& vocab, double alpha, double drift,
                              int users, int events_per_user, int days, std::uint64_t seed);

core::ClusterVocabulary make_synthetic_vocabulary(int n_clusters);

}  // namespace driftflow::synth
