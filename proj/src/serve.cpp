#include "driftflow/serve.hpp"

namespace driftflow::serve {

std::string to_string(LookupSource s) {
    switch (s) {
        case LookupSource::entry: return "entry";
        case LookupSource::fallback: return "fallback";
        case LookupSource::miss: return "miss";
    }
    return "miss";
}

LookupResult lookup_in(const pipeline::TableVersion& table, const core::PairKey& pair,
                       const Fallback& fallback) {
    LookupResult result;
    result.version_id = table.version_id;
    if (auto it = table.entries.find(pair); it != table.entries.end()) {
        result.prediction = it->second;
        result.source = LookupSource::entry;
        return result;
    }
    if (fallback.kind == Fallback::Kind::global_top && fallback.cluster) {
        result.prediction = fallback.cluster;
        result.source = LookupSource::fallback;
        return result;
    }
    result.source = LookupSource::miss;
    return result;
}

TableStore::TableStore(Fallback fallback) : fallback_(std::move(fallback)) {}

std::int64_t TableStore::publish(pipeline::TableVersion table) {
    std::lock_guard<std::mutex> lock(write_mutex_);
    if (!history_.empty() && table.version_id <= history_.back())
        throw PublishError("version id " + std::to_string(table.version_id) +
                           " does not exceed current " + std::to_string(history_.back()));
    const std::int64_t id = table.version_id;
    std::atomic_store(&current_,
                      std::shared_ptr<const pipeline::TableVersion>(
                          std::make_shared<const pipeline::TableVersion>(std::move(table))));
    history_.push_back(id);
    return id;
}

LookupResult TableStore::lookup(const core::PairKey& pair) const {
    const std::shared_ptr<const pipeline::TableVersion> pinned = std::atomic_load(&current_);
    if (!pinned) return LookupResult{};  // nothing published yet
    return lookup_in(*pinned, pair, fallback_);
}

std::vector<std::int64_t> TableStore::history() const {
    std::lock_guard<std::mutex> lock(write_mutex_);
    return history_;
}

std::shared_ptr<const pipeline::TableVersion> TableStore::current() const {
    return std::atomic_load(&current_);
}

}  // namespace driftflow::serve
