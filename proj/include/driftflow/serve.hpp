#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "driftflow/core.hpp"
#include "driftflow/pipeline.hpp"

namespace driftflow::serve {

struct PublishError : core::Error {
    using core::Error::Error;
};

struct Fallback {
    enum class Kind { none, global_top };
    Kind kind = Kind::none;
    std::optional<core::ClusterId> cluster;

    static Fallback none() { return {}; }
    static Fallback global_top(core::ClusterId c) {
        return {Kind::global_top, std::move(c)};
    }
};

enum class LookupSource { entry, fallback, miss };

std::string to_string(LookupSource s);

struct LookupResult {
    std::optional<core::ClusterId> prediction;
    std::int64_t version_id = 0;
    LookupSource source = LookupSource::miss;
};

// Lookup against one pinned version; shared by the store and by eval.
LookupResult lookup_in(const pipeline::TableVersion& table, const core::PairKey& pair,
                       const Fallback& fallback);

// Versioned in-memory table store: many concurrent readers, single writer.
// publish swaps the current version atomically; a reader pins exactly one
// version for the duration of a lookup, so no torn reads are possible.
class TableStore {
public:
    explicit TableStore(Fallback fallback = Fallback::none());

    // Caller guarantees the table passed its quality gates.
    // Throws PublishError unless version_id exceeds every published id.
    std::int64_t publish(pipeline::TableVersion table);

    LookupResult lookup(const core::PairKey& pair) const;

    std::vector<std::int64_t> history() const;
    std::shared_ptr<const pipeline::TableVersion> current() const;

private:
    std::shared_ptr<const pipeline::TableVersion> current_;  // accessed via atomic_load/store
    Fallback fallback_;
    mutable std::mutex write_mutex_;
    std::vector<std::int64_t> history_;
};

}  // namespace driftflow::serve
