#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pht/common/labels.hpp"
#include "pht/learner/adam.hpp"
#include "pht/orchestrator/orchestrator.hpp"
#include "pht/partition/partitioner.hpp"
#include "pht/preprocess/image.hpp"

namespace pht::harness {

struct SyntheticSpec {
    std::uint64_t n = 2000;
    std::uint32_t image_size = 16;
    std::vector<double> proportions; // canonical diagnosis-code order
};

struct DirectorySpec {
    std::filesystem::path path;
    std::string labels_csv = "labels.csv";
};

struct PlanConfig {
    orch::Policy policy = orch::Policy::IIL;
    std::uint64_t cycles = 1;
    std::uint64_t rounds = 10;
    std::optional<std::uint64_t> local_epochs; // defaults to training.epochs
    orch::Weighting weighting = orch::Weighting::BySampleCount;
};

// Parsed and validated experiment description. One seed drives data
// generation, partitioning, initialization, shuffling and augmentation.
struct ExperimentConfig {
    std::optional<SyntheticSpec> synthetic;
    std::optional<DirectorySpec> directory;
    partition::PartitionSpec partition;
    learner::TrainingConfig training;
    preprocess::AugmentConfig augment;
    std::uint64_t model_hidden = 0;
    std::vector<PlanConfig> plans;
    std::uint64_t seed = 0;
    std::filesystem::path output = "out";

    void validate() const;
    nlohmann::json canonical_json() const;
    std::string digest() const; // sha256 hex of the canonical form
};

// Class proportions observed on the full dataset's histogram: NV half,
// MEL 18%, BCC 13%, BKL 10%, the four rare classes sharing the rest.
std::vector<double> default_class_proportions();

// The desk-scale experiment: 2000 synthetic 16x16 images, 3 stations,
// centralized + IIL + FL plans.
ExperimentConfig default_fixture_config(std::uint64_t seed);

// Parses config JSON with field-path and line diagnostics; all errors
// surface as ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::string& origin);
ExperimentConfig load_config_file(const std::filesystem::path& path);

} // namespace pht::harness
