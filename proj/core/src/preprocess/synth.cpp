#include "pht/preprocess/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>

#include "pht/common/rng.hpp"
#include "pht/preprocess/png_io.hpp"

namespace pht::preprocess {

namespace {

constexpr std::uint64_t kSynthTag = 0x73796e74; // "synt"

std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
}

// Distinct base color per class, spread around the hue circle.
void class_color(std::size_t label, std::size_t num_classes,
                 double& r, double& g, double& b) {
    const double h = static_cast<double>(label) / static_cast<double>(num_classes);
    const double s = 0.55, v = 0.62;
    const double hh = h * 6.0;
    const int i = static_cast<int>(hh) % 6;
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
    r *= 255.0;
    g *= 255.0;
    b *= 255.0;
}

RawImage render_sample(std::size_t label, std::size_t num_classes,
                       std::uint32_t size, CounterRng& rng) {
    RawImage img{size, size, {}};
    img.data.resize(std::size_t{size} * size * RawImage::kChannels);

    // Skin-tone background with per-pixel noise.
    for (std::uint32_t y = 0; y < size; ++y) {
        for (std::uint32_t x = 0; x < size; ++x) {
            img.at(x, y, 0) = clamp_u8(208.0 + rng.next_range(-18.0, 18.0));
            img.at(x, y, 1) = clamp_u8(176.0 + rng.next_range(-18.0, 18.0));
            img.at(x, y, 2) = clamp_u8(158.0 + rng.next_range(-18.0, 18.0));
        }
    }

    // Lesion disk: class-coded color and stripe orientation.
    const double half = size / 2.0;
    const double cx = half + rng.next_range(-half / 5.0, half / 5.0);
    const double cy = half + rng.next_range(-half / 5.0, half / 5.0);
    const double radius = size * rng.next_range(0.26, 0.38);
    const double theta =
        std::numbers::pi * static_cast<double>(label) / static_cast<double>(num_classes);
    const double wavelength = 3.0 + static_cast<double>(label % 3) * 2.0;
    double cr, cg, cb;
    class_color(label, num_classes, cr, cg, cb);

    for (std::uint32_t y = 0; y < size; ++y) {
        for (std::uint32_t x = 0; x < size; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            const double dist = std::sqrt(dx * dx + dy * dy);
            if (dist > radius) continue;
            const double proj = dx * std::cos(theta) + dy * std::sin(theta);
            const double stripe =
                1.0 + 0.25 * std::sin(2.0 * std::numbers::pi * proj / wavelength);
            const double edge = std::min(1.0, radius - dist); // 1px soft rim
            const double noise = rng.next_range(-12.0, 12.0);
            img.at(x, y, 0) = clamp_u8(
                (1.0 - edge) * img.at(x, y, 0) + edge * (cr * stripe + noise));
            img.at(x, y, 1) = clamp_u8(
                (1.0 - edge) * img.at(x, y, 1) + edge * (cg * stripe + noise));
            img.at(x, y, 2) = clamp_u8(
                (1.0 - edge) * img.at(x, y, 2) + edge * (cb * stripe + noise));
        }
    }
    return img;
}

const char* kSites[] = {"head/neck", "torso",       "upper extremity",
                        "lower extremity", "palms/soles", "oral/genital"};

} // namespace

std::vector<std::size_t> largest_remainder_counts(std::uint64_t n,
                                                  std::span<const double> proportions) {
    if (proportions.empty()) throw ConfigError("no class proportions given");
    double sum = 0.0;
    for (double p : proportions) {
        if (p < 0.0) throw ConfigError("class proportions must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("class proportions must sum to 1");
    }

    std::vector<std::size_t> counts(proportions.size());
    std::vector<std::pair<double, std::size_t>> remainders; // (remainder, class)
    std::uint64_t assigned = 0;
    for (std::size_t k = 0; k < proportions.size(); ++k) {
        const double quota = static_cast<double>(n) * proportions[k];
        counts[k] = static_cast<std::size_t>(std::floor(quota));
        assigned += counts[k];
        remainders.emplace_back(quota - std::floor(quota), k);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::uint64_t i = 0; i < n - assigned; ++i) {
        ++counts[remainders[i % remainders.size()].second];
    }
    return counts;
}

std::vector<SynthSample> synth_dataset(std::uint64_t n,
                                       std::span<const double> proportions,
                                       std::uint32_t image_size,
                                       std::uint64_t seed) {
    if (image_size == 0) throw ConfigError("image_size must be positive");
    if (n < proportions.size()) {
        throw ConfigError("need at least one sample per class");
    }
    const std::vector<std::size_t> counts = largest_remainder_counts(n, proportions);

    std::vector<SynthSample> samples;
    samples.reserve(n);
    std::size_t index = 0;
    for (std::size_t label = 0; label < counts.size(); ++label) {
        for (std::size_t i = 0; i < counts[label]; ++i, ++index) {
            CounterRng rng({seed, kSynthTag, index});
            SynthSample s;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "synth-%06zu", index);
            s.id = buf;
            s.label = label;
            s.image = render_sample(label, counts.size(), image_size, rng);
            // Patient metadata, partially missing on purpose.
            if (rng.next_unit() >= 0.2) {
                s.age = 20 + static_cast<unsigned>(rng.next_below(70));
            }
            if (rng.next_unit() >= 0.2) {
                const char* sexes[] = {"male", "female", "other"};
                s.sex = sexes[rng.next_below(3)];
            }
            if (rng.next_unit() >= 0.2) {
                s.anatomical_site = kSites[rng.next_below(std::size(kSites))];
            }
            samples.push_back(std::move(s));
        }
    }
    return samples;
}

void write_dataset_dir(const std::filesystem::path& dir,
                       std::span<const SynthSample> samples,
                       const ClassSet& classes) {
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "labels.csv", std::ios::binary);
    if (!csv) throw DataError("cannot write " + (dir / "labels.csv").string());
    csv << "filename,label\n";
    for (const auto& s : samples) {
        const std::string filename = s.id + ".png";
        const auto png = encode_png(s.image);
        std::ofstream out(dir / filename, std::ios::binary);
        if (!out) throw DataError("cannot write " + (dir / filename).string());
        out.write(reinterpret_cast<const char*>(png.data()),
                  static_cast<std::streamsize>(png.size()));
        csv << filename << ',' << classes.code(s.label) << '\n';
    }
}

} // namespace pht::preprocess
