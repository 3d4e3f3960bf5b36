#include "pht/preprocess/feature_source.hpp"

#include "pht/common/rng.hpp"

namespace pht::preprocess {

namespace {
constexpr std::uint64_t kAugmentTag = 0x6175676d; // "augm"
} // namespace

std::vector<double> flatten_features(const RawImage& image) {
    image.validate();
    std::vector<double> out;
    out.reserve(image.data.size());
    for (std::uint8_t v : image.data) out.push_back(v / 255.0);
    return out;
}

ImageSource::ImageSource(std::vector<std::pair<RawImage, int>> samples,
                         AugmentConfig config, std::uint64_t seed, bool augmented)
    : samples_(std::move(samples)),
      config_(config),
      seed_(seed),
      augmented_(augmented && !config.is_identity()) {
    config_.validate();
    for (const auto& [image, _] : samples_) image.validate();
}

std::size_t ImageSource::feature_dim() const {
    if (samples_.empty()) return 0;
    return samples_[0].first.data.size();
}

learner::LabeledSample ImageSource::sample(std::size_t index, std::uint64_t epoch) const {
    const auto& [image, label] = samples_.at(index);
    if (!augmented_) {
        return {flatten_features(image), label};
    }
    const std::uint64_t draw_seed = mix_seed({seed_, kAugmentTag, epoch, index});
    return {flatten_features(augment(image, config_, draw_seed)), label};
}

} // namespace pht::preprocess
