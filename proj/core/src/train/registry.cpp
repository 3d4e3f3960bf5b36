#include "pht/train/registry.hpp"

#include "pht/common/errors.hpp"

namespace pht::train {

void TrainRegistry::push(const TrainBundle& bundle) {
    bundle.verify();
    std::lock_guard lock(mutex_);
    auto& versions = versions_[bundle.manifest().train_id];
    if (!versions.empty()) {
        const TrainBundle previous = TrainBundle::deserialize(versions.back());
        if (bundle.parameters().version <= previous.parameters().version) {
            throw IntegrityError("push rejected: out-of-order parameter version for train " +
                                 bundle.manifest().train_id);
        }
        const auto& old_prov = previous.manifest().provenance;
        const auto& new_prov = bundle.manifest().provenance;
        if (new_prov.size() < old_prov.size() ||
            !std::equal(old_prov.begin(), old_prov.end(), new_prov.begin())) {
            throw IntegrityError("push rejected: provenance is not append-only for train " +
                                 bundle.manifest().train_id);
        }
    }
    versions.push_back(bundle.serialize());
}

const std::vector<std::vector<std::uint8_t>>& TrainRegistry::versions_of(
    const std::string& train_id) const {
    auto it = versions_.find(train_id);
    if (it == versions_.end() || it->second.empty()) {
        throw NotFoundError("unknown train id: " + train_id);
    }
    return it->second;
}

TrainBundle TrainRegistry::pull(const std::string& train_id) const {
    std::lock_guard lock(mutex_);
    return TrainBundle::deserialize(versions_of(train_id).back());
}

std::vector<std::uint8_t> TrainRegistry::pull_bytes(const std::string& train_id) const {
    std::lock_guard lock(mutex_);
    return versions_of(train_id).back();
}

std::vector<TrainRegistry::VersionInfo> TrainRegistry::history(
    const std::string& train_id) const {
    std::lock_guard lock(mutex_);
    std::vector<VersionInfo> out;
    for (const auto& bytes : versions_of(train_id)) {
        const TrainBundle b = TrainBundle::deserialize(bytes);
        out.push_back({b.parameters().version, b.manifest().provenance.size(),
                       b.digest_hex()});
    }
    return out;
}

std::vector<std::string> TrainRegistry::train_ids() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> ids;
    ids.reserve(versions_.size());
    for (const auto& [id, _] : versions_) ids.push_back(id);
    return ids;
}

} // namespace pht::train
