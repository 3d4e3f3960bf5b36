#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pht/harness/config.hpp"
#include "pht/partition/partitioner.hpp"
#include "pht/preprocess/image.hpp"

namespace pht::harness {

struct DatasetSample {
    std::string id;
    preprocess::RawImage image;
    std::vector<std::uint8_t> png;
    std::string label; // diagnosis code
    std::optional<unsigned> age;
    std::optional<std::string> sex;
    std::optional<std::string> anatomical_site;
};

struct Dataset {
    std::vector<DatasetSample> samples; // sorted by id
    ClassSet classes;                   // the canonical diagnosis codes
    std::map<std::string, std::size_t> index;

    const DatasetSample& by_id(const std::string& id) const;
    partition::LabeledIds labeled_ids() const;
};

// Generates the synthetic corpus or loads PNGs + labels CSV from disk.
Dataset load_dataset(const ExperimentConfig& config, std::uint64_t seed);

// Reads a labels CSV (header "filename,label").
std::vector<std::pair<std::string, std::string>> read_labels_csv(
    const std::filesystem::path& path);

} // namespace pht::harness
