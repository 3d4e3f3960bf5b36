#pragma once

#include <cstdint>
#include <vector>

#include "pht/common/errors.hpp"

namespace pht::preprocess {

// Row-major 8-bit RGB image.
struct RawImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> data;

    static constexpr std::uint32_t kChannels = 3;

    static RawImage filled(std::uint32_t w, std::uint32_t h, std::uint8_t value) {
        return {w, h, std::vector<std::uint8_t>(std::size_t{w} * h * kChannels, value)};
    }

    std::uint8_t at(std::uint32_t x, std::uint32_t y, std::uint32_t c) const {
        return data[(std::size_t{y} * width + x) * kChannels + c];
    }
    std::uint8_t& at(std::uint32_t x, std::uint32_t y, std::uint32_t c) {
        return data[(std::size_t{y} * width + x) * kChannels + c];
    }

    void validate() const {
        if (width == 0 || height == 0) throw ConfigError("image dimensions must be positive");
        if (data.size() != std::size_t{width} * height * kChannels) {
            throw ConfigError("image data length does not match dimensions");
        }
    }

    bool operator==(const RawImage&) const = default;
};

struct AugmentConfig {
    double horizontal_flip_prob = 0.0;
    double vertical_flip_prob = 0.0;
    // Multiplicative jitter half-ranges: a factor is drawn uniformly from
    // [1 - r, 1 + r]. Hue is an additive rotation drawn from [-r, +r]
    // (fraction of a full turn).
    double brightness = 0.0;
    double contrast = 0.0;
    double saturation = 0.0;
    double hue = 0.0;
    std::uint32_t target_size = 256;

    void validate() const;
    bool is_identity() const {
        return horizontal_flip_prob == 0.0 && vertical_flip_prob == 0.0 &&
               brightness == 0.0 && contrast == 0.0 && saturation == 0.0 && hue == 0.0;
    }
};

// Largest centered square: s = min(width, height), offsets floor((dim-s)/2).
RawImage center_crop(const RawImage& image);

// Bilinear resize of a square image to target x target (half-pixel-center
// mapping, so an identity target copies bit-exactly and 2:1 downsampling
// averages 2x2 blocks). Throws ConfigError on non-square input.
RawImage resize(const RawImage& image, std::uint32_t target);

RawImage flip_horizontal(const RawImage& image);
RawImage flip_vertical(const RawImage& image);

// Photometric primitives; factor 1.0 (or delta 0.0) is the identity.
// Out-of-range channel values clamp to [0, 255].
RawImage adjust_brightness(const RawImage& image, double factor);
RawImage adjust_contrast(const RawImage& image, double factor);
RawImage adjust_saturation(const RawImage& image, double factor);
RawImage adjust_hue(const RawImage& image, double delta);

// Flips drawn independently with the configured probabilities, then
// brightness, contrast, saturation and hue jitter in that order.
// Deterministic under (config, seed); zero config returns the input
// bit-exactly.
RawImage augment(const RawImage& image, const AugmentConfig& config,
                 std::uint64_t seed);

// center_crop followed by resize to `target` — the station-side pipeline
// applied before training.
RawImage preprocess(const RawImage& image, std::uint32_t target);

} // namespace pht::preprocess
