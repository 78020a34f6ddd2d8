#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "driftflow/ingest.hpp"
#include "helpers.hpp"

using namespace driftflow;
using testutil::id;

namespace {

core::InteractionEvent event(const std::string& user, std::int64_t t, const std::string& cid,
                             bool positive) {
    return {user, t, id(cid), positive};
}

}  // namespace

TEST_CASE("build_sequences filters negatives and sorts by timestamp") {
    const auto vocab = testutil::small_vocab(3);
    ingest::EventBatch batch;
    batch.events = {event("u", 2, "c2", true), event("u", 1, "c1", true),
                    event("u", 3, "c3", false)};
    const auto sequences = ingest::build_sequences(batch, vocab);
    REQUIRE(sequences.size() == 1);
    CHECK(sequences[0].clusters == std::vector<core::ClusterId>{id("c1"), id("c2")});
}

TEST_CASE("build_sequences emits nothing for all-negative users") {
    const auto vocab = testutil::small_vocab(2);
    ingest::EventBatch batch;
    batch.events = {event("u", 1, "c1", false), event("u", 2, "c2", false)};
    CHECK(ingest::build_sequences(batch, vocab).empty());
}

TEST_CASE("build_sequences separates interleaved users") {
    const auto vocab = testutil::small_vocab(3);
    ingest::EventBatch batch;
    batch.events = {event("a", 1, "c1", true), event("b", 1, "c2", true),
                    event("a", 2, "c2", true), event("b", 2, "c3", true)};
    const auto sequences = ingest::build_sequences(batch, vocab);
    REQUIRE(sequences.size() == 2);
    CHECK(sequences[0].user_id == "a");
    CHECK(sequences[1].user_id == "b");
    CHECK(sequences[0].clusters == std::vector<core::ClusterId>{id("c1"), id("c2")});
    CHECK(sequences[1].clusters == std::vector<core::ClusterId>{id("c2"), id("c3")});
}

TEST_CASE("timestamp ties keep input order") {
    const auto vocab = testutil::small_vocab(3);
    ingest::EventBatch batch;
    batch.events = {event("u", 5, "c2", true), event("u", 5, "c3", true),
                    event("u", 1, "c1", true)};
    const auto sequences = ingest::build_sequences(batch, vocab);
    REQUIRE(sequences.size() == 1);
    CHECK(sequences[0].clusters ==
          std::vector<core::ClusterId>{id("c1"), id("c2"), id("c3")});
}

TEST_CASE("unknown cluster id raises IngestError naming the record") {
    const auto vocab = testutil::small_vocab(2);
    ingest::EventBatch batch;
    batch.events = {event("u", 1, "zz", true)};
    CHECK_THROWS_WITH_AS(ingest::build_sequences(batch, vocab),
                         doctest::Contains("zz"), ingest::IngestError);
}

TEST_CASE("dedup collapses adjacent repeats before extracting triples") {
    core::WatchSequence seq;
    seq.user_id = "u";
    seq.clusters = {id("c1"), id("c1"), id("c2"), id("c3")};
    const auto triples = ingest::dedup_and_extract_triples(seq);
    REQUIRE(triples.size() == 1);
    CHECK(triples[0] == testutil::triple("c1", "c2", "c3"));
}

TEST_CASE("sequences shorter than three collapsed entries yield no triples") {
    core::WatchSequence seq;
    seq.user_id = "u";
    seq.clusters = {id("c1"), id("c2")};
    CHECK(ingest::dedup_and_extract_triples(seq).empty());
    seq.clusters = {id("c1"), id("c1"), id("c1")};
    CHECK(ingest::dedup_and_extract_triples(seq).empty());
}

TEST_CASE("sliding window emits every consecutive triple") {
    core::WatchSequence seq;
    seq.user_id = "u";
    seq.clusters = {id("c1"), id("c2"), id("c3"), id("c4")};
    const auto triples = ingest::dedup_and_extract_triples(seq);
    REQUIRE(triples.size() == 2);
    CHECK(triples[0] == testutil::triple("c1", "c2", "c3"));
    CHECK(triples[1] == testutil::triple("c2", "c3", "c4"));
}

namespace {

ingest::EventBatch random_batch(std::mt19937_64& rng, int n_users, int n_clusters,
                                int max_events) {
    ingest::EventBatch batch;
    std::uniform_int_distribution<int> cluster_pick(1, n_clusters);
    std::uniform_int_distribution<int> event_count(0, max_events);
    std::uniform_int_distribution<std::int64_t> time_pick(0, 50);
    std::bernoulli_distribution positive(0.8);
    for (int u = 0; u < n_users; ++u) {
        const int n = event_count(rng);
        for (int i = 0; i < n; ++i)
            batch.events.push_back({"u" + std::to_string(u), time_pick(rng),
                                    id("c" + std::to_string(cluster_pick(rng))), positive(rng)});
    }
    return batch;
}

}  // namespace

TEST_CASE("triple extraction invariants over random batches") {
    const auto vocab = testutil::small_vocab(6);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto batch = random_batch(rng, 8, 6, 12);
        for (const core::WatchSequence& seq : ingest::build_sequences(batch, vocab)) {
            const auto collapsed = ingest::collapse_adjacent(seq.clusters);
            const auto triples = ingest::dedup_and_extract_triples(seq);
            CHECK(triples.size() ==
                  (collapsed.size() < 3 ? 0u : collapsed.size() - 2));
            for (const core::TransitionTriple& t : triples) {
                CHECK(t.pair.first != t.pair.second);
                CHECK(t.pair.second != t.next);
            }
        }
    }
}

TEST_CASE("ingest output is independent of batch partitioning") {
    const auto vocab = testutil::small_vocab(5);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto batch = random_batch(rng, 10, 5, 10);
        // partition by user parity, preserving input order within each part
        ingest::EventBatch part_a, part_b;
        for (const auto& ev : batch.events)
            ((ev.user_id.back() - '0') % 2 == 0 ? part_a : part_b).events.push_back(ev);

        auto whole = ingest::extract_batch_triples(batch, vocab);
        auto merged = ingest::extract_batch_triples(part_a, vocab);
        auto part = ingest::extract_batch_triples(part_b, vocab);
        merged.insert(merged.end(), part.begin(), part.end());

        std::sort(whole.begin(), whole.end());
        std::sort(merged.begin(), merged.end());
        CHECK(whole == merged);
    }
}
