#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "pht/train/bundle.hpp"

namespace pht::train {

// Versioned Train repository. Pushes are serialized per train id and
// rejected when they would move a train's version backwards or rewrite
// its history; pulls return the latest pushed bytes verbatim.
class TrainRegistry {
public:
    void push(const TrainBundle& bundle);

    TrainBundle pull(const std::string& train_id) const;
    std::vector<std::uint8_t> pull_bytes(const std::string& train_id) const;

    struct VersionInfo {
        std::uint64_t params_version = 0;
        std::size_t provenance_length = 0;
        std::string digest_hex;
    };
    std::vector<VersionInfo> history(const std::string& train_id) const;

    std::vector<std::string> train_ids() const;

private:
    const std::vector<std::vector<std::uint8_t>>& versions_of(
        const std::string& train_id) const;

    mutable std::mutex mutex_;
    std::map<std::string, std::vector<std::vector<std::uint8_t>>> versions_;
};

} // namespace pht::train
