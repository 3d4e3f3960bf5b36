#include "pht/preprocess/image.hpp"

#include <algorithm>
#include <cmath>

#include "pht/common/rng.hpp"

namespace pht::preprocess {

namespace {

std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
}

double luma(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

// h in [0,1), s and v in [0,1].
void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    v = mx;
    s = mx == 0.0 ? 0.0 : d / mx;
    if (d == 0.0) {
        h = 0.0;
    } else if (mx == r) {
        h = std::fmod((g - b) / d, 6.0) / 6.0;
    } else if (mx == g) {
        h = ((b - r) / d + 2.0) / 6.0;
    } else {
        h = ((r - g) / d + 4.0) / 6.0;
    }
    if (h < 0.0) h += 1.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    const double hh = h * 6.0;
    const int i = static_cast<int>(std::floor(hh)) % 6;
    const double f = hh - std::floor(hh);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (i) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
}

} // namespace

void AugmentConfig::validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(horizontal_flip_prob) || !prob(vertical_flip_prob)) {
        throw ConfigError("flip probabilities must be in [0, 1]");
    }
    if (brightness < 0.0 || contrast < 0.0 || saturation < 0.0 || hue < 0.0) {
        throw ConfigError("jitter ranges must be non-negative");
    }
    if (hue > 0.5) throw ConfigError("hue jitter range must be at most 0.5");
    if (target_size == 0) throw ConfigError("target_size must be positive");
}

RawImage center_crop(const RawImage& image) {
    image.validate();
    const std::uint32_t s = std::min(image.width, image.height);
    const std::uint32_t ox = (image.width - s) / 2;
    const std::uint32_t oy = (image.height - s) / 2;
    RawImage out{s, s, {}};
    out.data.resize(std::size_t{s} * s * RawImage::kChannels);
    for (std::uint32_t y = 0; y < s; ++y) {
        const std::uint8_t* src =
            &image.data[(std::size_t{y + oy} * image.width + ox) * RawImage::kChannels];
        std::uint8_t* dst = &out.data[std::size_t{y} * s * RawImage::kChannels];
        std::copy_n(src, std::size_t{s} * RawImage::kChannels, dst);
    }
    return out;
}

RawImage resize(const RawImage& image, std::uint32_t target) {
    image.validate();
    if (image.width != image.height) {
        throw ConfigError("resize expects a square image; center-crop first");
    }
    if (target == 0) throw ConfigError("resize target must be positive");
    if (target == image.width) return image;

    const std::uint32_t n = image.width;
    const double scale = static_cast<double>(n) / static_cast<double>(target);
    RawImage out{target, target, {}};
    out.data.resize(std::size_t{target} * target * RawImage::kChannels);

    for (std::uint32_t y = 0; y < target; ++y) {
        const double sy = (y + 0.5) * scale - 0.5;
        const double cy = std::clamp(sy, 0.0, static_cast<double>(n - 1));
        const std::uint32_t y0 = static_cast<std::uint32_t>(cy);
        const std::uint32_t y1 = std::min(y0 + 1, n - 1);
        const double fy = cy - y0;
        for (std::uint32_t x = 0; x < target; ++x) {
            const double sx = (x + 0.5) * scale - 0.5;
            const double cx = std::clamp(sx, 0.0, static_cast<double>(n - 1));
            const std::uint32_t x0 = static_cast<std::uint32_t>(cx);
            const std::uint32_t x1 = std::min(x0 + 1, n - 1);
            const double fx = cx - x0;
            for (std::uint32_t c = 0; c < RawImage::kChannels; ++c) {
                const double top = (1.0 - fx) * image.at(x0, y0, c) + fx * image.at(x1, y0, c);
                const double bot = (1.0 - fx) * image.at(x0, y1, c) + fx * image.at(x1, y1, c);
                out.at(x, y, c) = clamp_u8((1.0 - fy) * top + fy * bot);
            }
        }
    }
    return out;
}

RawImage flip_horizontal(const RawImage& image) {
    image.validate();
    RawImage out = image;
    for (std::uint32_t y = 0; y < image.height; ++y) {
        for (std::uint32_t x = 0; x < image.width; ++x) {
            for (std::uint32_t c = 0; c < RawImage::kChannels; ++c) {
                out.at(x, y, c) = image.at(image.width - 1 - x, y, c);
            }
        }
    }
    return out;
}

RawImage flip_vertical(const RawImage& image) {
    image.validate();
    RawImage out = image;
    for (std::uint32_t y = 0; y < image.height; ++y) {
        for (std::uint32_t x = 0; x < image.width; ++x) {
            for (std::uint32_t c = 0; c < RawImage::kChannels; ++c) {
                out.at(x, y, c) = image.at(x, image.height - 1 - y, c);
            }
        }
    }
    return out;
}

RawImage adjust_brightness(const RawImage& image, double factor) {
    image.validate();
    RawImage out = image;
    for (auto& v : out.data) v = clamp_u8(factor * v);
    return out;
}

RawImage adjust_contrast(const RawImage& image, double factor) {
    image.validate();
    double mean = 0.0;
    const std::size_t pixels = std::size_t{image.width} * image.height;
    for (std::size_t i = 0; i < pixels; ++i) {
        mean += luma(image.data[3 * i], image.data[3 * i + 1], image.data[3 * i + 2]);
    }
    mean /= static_cast<double>(pixels);
    RawImage out = image;
    for (auto& v : out.data) v = clamp_u8(factor * v + (1.0 - factor) * mean);
    return out;
}

RawImage adjust_saturation(const RawImage& image, double factor) {
    image.validate();
    RawImage out = image;
    const std::size_t pixels = std::size_t{image.width} * image.height;
    for (std::size_t i = 0; i < pixels; ++i) {
        const double g = luma(image.data[3 * i], image.data[3 * i + 1], image.data[3 * i + 2]);
        for (int c = 0; c < 3; ++c) {
            out.data[3 * i + c] = clamp_u8(factor * image.data[3 * i + c] + (1.0 - factor) * g);
        }
    }
    return out;
}

RawImage adjust_hue(const RawImage& image, double delta) {
    image.validate();
    RawImage out = image;
    const std::size_t pixels = std::size_t{image.width} * image.height;
    for (std::size_t i = 0; i < pixels; ++i) {
        double h, s, v;
        rgb_to_hsv(image.data[3 * i] / 255.0, image.data[3 * i + 1] / 255.0,
                   image.data[3 * i + 2] / 255.0, h, s, v);
        h = std::fmod(h + delta + 1.0, 1.0);
        double r, g, b;
        hsv_to_rgb(h, s, v, r, g, b);
        out.data[3 * i] = clamp_u8(r * 255.0);
        out.data[3 * i + 1] = clamp_u8(g * 255.0);
        out.data[3 * i + 2] = clamp_u8(b * 255.0);
    }
    return out;
}

RawImage augment(const RawImage& image, const AugmentConfig& config, std::uint64_t seed) {
    config.validate();
    image.validate();
    if (config.is_identity()) return image;

    CounterRng rng({seed});
    RawImage out = image;
    if (config.horizontal_flip_prob > 0.0 && rng.next_unit() < config.horizontal_flip_prob) {
        out = flip_horizontal(out);
    }
    if (config.vertical_flip_prob > 0.0 && rng.next_unit() < config.vertical_flip_prob) {
        out = flip_vertical(out);
    }
    if (config.brightness > 0.0) {
        out = adjust_brightness(out, rng.next_range(1.0 - config.brightness,
                                                    1.0 + config.brightness));
    }
    if (config.contrast > 0.0) {
        out = adjust_contrast(out, rng.next_range(1.0 - config.contrast,
                                                  1.0 + config.contrast));
    }
    if (config.saturation > 0.0) {
        out = adjust_saturation(out, rng.next_range(1.0 - config.saturation,
                                                    1.0 + config.saturation));
    }
    if (config.hue > 0.0) {
        out = adjust_hue(out, rng.next_range(-config.hue, config.hue));
    }
    return out;
}

RawImage preprocess(const RawImage& image, std::uint32_t target) {
    return resize(center_crop(image), target);
}

} // namespace pht::preprocess
