#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pht/learner/train.hpp"
#include "pht/preprocess/image.hpp"

namespace pht::preprocess {

// Row-major pixels scaled to [0, 1].
std::vector<double> flatten_features(const RawImage& image);

// TrainingSource over preprocessed images. With `augmented` set, every
// (epoch, index) pair re-draws the augmentation; otherwise images pass
// through untouched. Deterministic under (config, seed).
class ImageSource final : public learner::TrainingSource {
public:
    ImageSource(std::vector<std::pair<RawImage, int>> samples, AugmentConfig config,
                std::uint64_t seed, bool augmented);

    std::size_t size() const override { return samples_.size(); }
    std::size_t feature_dim() const override;
    learner::LabeledSample sample(std::size_t index, std::uint64_t epoch) const override;

private:
    std::vector<std::pair<RawImage, int>> samples_;
    AugmentConfig config_;
    std::uint64_t seed_;
    bool augmented_;
};

} // namespace pht::preprocess
