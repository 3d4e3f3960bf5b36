#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pht/common/labels.hpp"

namespace pht::partition {

struct PartitionSpec {
    double test_fraction = 0.2;
    std::uint32_t station_count = 3;
    double validation_fraction = 0.2;
    std::uint64_t seed = 0;

    void validate() const;
};

struct DatasetShard {
    std::uint32_t station_id = 0;
    std::vector<std::string> training;
    std::vector<std::string> validation;

    std::size_t size() const { return training.size() + validation.size(); }
};

struct Partition {
    std::vector<std::string> test;
    std::vector<DatasetShard> shards;
    PartitionSpec spec;
};

// One (sample id, class label) pair per sample; order does not matter.
using LabeledIds = std::vector<std::pair<std::string, std::string>>;

// Stratified split: the test pool is drawn per class first, then each
// class's remainder is apportioned across stations (largest remainder,
// leftovers round-robin by ascending station id), then each shard splits
// into train/validation with train = floor(shard_size * (1 - vf)).
// Deterministic under spec.seed; ids are canonically sorted before the
// seeded shuffle, so input order is irrelevant.
Partition split(const LabeledIds& labels, const PartitionSpec& spec);

struct DistributionRow {
    std::string split;
    std::size_t count = 0;
    std::vector<double> proportions; // per class, sums to 1
};

// Per-split class proportions: test, each whole shard, and each shard's
// train/validation halves.
std::vector<DistributionRow> distribution_report(const Partition& partition,
                                                 const LabeledIds& labels,
                                                 const ClassSet& classes);

// Class set implied by a labeled id list: distinct labels, sorted.
ClassSet infer_classes(const LabeledIds& labels);

nlohmann::json to_json(const Partition& partition);
Partition partition_from_json(const nlohmann::json& j);

} // namespace pht::partition
