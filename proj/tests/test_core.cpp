#include <doctest.h>

#include <random>

#include "driftflow/core.hpp"
#include "helpers.hpp"

using namespace driftflow;
using testutil::cluster;

TEST_CASE("normalize_label lowercases and trims") {
    CHECK(core::normalize_label("  Cooking  ") == "cooking");
    CHECK(core::normalize_label("DIY   Crafts") == "diy crafts");
    CHECK(core::normalize_label("a\tb\nc") == "a b c");
    CHECK_THROWS_AS(core::normalize_label("   "), core::NormalizationError);
    CHECK_THROWS_AS(core::normalize_label(""), core::NormalizationError);
}

TEST_CASE("normalize_label is idempotent") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len(1, 24);
    const std::string alphabet = "aB cD\t\nEf-19 ";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    for (int trial = 0; trial < 500; ++trial) {
        std::string raw;
        for (int i = 0, n = len(rng); i < n; ++i) raw.push_back(alphabet[pick(rng)]);
        try {
            const std::string once = core::normalize_label(raw);
            CHECK(core::normalize_label(once) == once);
        } catch (const core::NormalizationError&) {
            // all-whitespace draw
        }
    }
}

TEST_CASE("cluster id equality is normalized-text equality") {
    CHECK(core::ClusterId::of("  A ") == core::ClusterId::of("a"));
    CHECK(core::ClusterId::of("a b") != core::ClusterId::of("ab"));
}

TEST_CASE("pair and triple invariants") {
    CHECK_THROWS_AS(core::PairKey(testutil::id("x"), testutil::id("x")), core::Error);
    CHECK_THROWS_AS(testutil::triple("a", "b", "b"), core::Error);
    // next may equal pair.first (a, b, a is a valid adjacent-distinct walk)
    CHECK_NOTHROW(testutil::triple("a", "b", "a"));
}

TEST_CASE("validate_vocabulary reports violations as data") {
    SUBCASE("well-formed vocabulary is ok") {
        CHECK(core::validate_vocabulary(testutil::small_vocab(3)).ok());
    }
    SUBCASE("duplicate normalized description") {
        core::ClusterVocabulary vocab({cluster("a", "Cooking", {"k"}),
                                       cluster("b", "cooking ", {"k"})});
        const auto report = core::validate_vocabulary(vocab);
        CHECK_FALSE(report.ok());
        CHECK(report.violations.size() == 1);
    }
    SUBCASE("empty keyword list") {
        core::ClusterVocabulary vocab({cluster("a", "cooking", {})});
        CHECK_FALSE(core::validate_vocabulary(vocab).ok());
    }
    SUBCASE("duplicate id") {
        core::ClusterVocabulary vocab({cluster("a", "cooking", {"k"}),
                                       cluster("A ", "baking", {"k"})});
        CHECK_FALSE(core::validate_vocabulary(vocab).ok());
    }
}

TEST_CASE("valid vocabulary resolves descriptions injectively") {
    const auto vocab = testutil::small_vocab(5);
    REQUIRE(core::validate_vocabulary(vocab).ok());
    for (const core::Cluster& c : vocab.clusters()) {
        const core::Cluster* found = vocab.find_by_description(c.description);
        REQUIRE(found != nullptr);
        CHECK(found->id == c.id);
    }
}

TEST_CASE("ambiguous description does not resolve") {
    core::ClusterVocabulary vocab({cluster("a", "Cooking", {"k"}), cluster("b", "cooking", {"k"})});
    CHECK(vocab.find_by_description("cooking") == nullptr);
}

TEST_CASE("stable hash and unit interval") {
    CHECK(core::stable_hash("abc", 1) == core::stable_hash("abc", 1));
    CHECK(core::stable_hash("abc", 1) != core::stable_hash("abc", 2));
    CHECK(core::stable_hash("abc", 1) != core::stable_hash("abd", 1));
    for (int i = 0; i < 100; ++i) {
        const double u = core::hash_unit("probe" + std::to_string(i), 9);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
