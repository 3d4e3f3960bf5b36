#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pht/common/labels.hpp"
#include "pht/preprocess/image.hpp"

namespace pht::preprocess {

// A generated dermoscopy-like sample: a textured disk on a noisy
// background, where the disk's color and stripe pattern encode the class.
struct SynthSample {
    std::string id;
    RawImage image;
    std::size_t label = 0;
    std::optional<unsigned> age;
    std::optional<std::string> sex;
    std::optional<std::string> anatomical_site;
};

// Apportions n among classes proportionally using the largest-remainder
// rule (ties broken by lower class index). Proportions must sum to 1
// within 1e-9.
std::vector<std::size_t> largest_remainder_counts(std::uint64_t n,
                                                  std::span<const double> proportions);

// Deterministic under seed. Throws ConfigError when n is smaller than the
// number of classes.
std::vector<SynthSample> synth_dataset(std::uint64_t n,
                                       std::span<const double> proportions,
                                       std::uint32_t image_size,
                                       std::uint64_t seed);

// Emits <id>.png per sample plus labels.csv with header "filename,label".
void write_dataset_dir(const std::filesystem::path& dir,
                       std::span<const SynthSample> samples,
                       const ClassSet& classes);

} // namespace pht::preprocess
