#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace pht {

// Counter-based PRNG: every output is a pure function of (key, counter),
// so a stream can be reconstructed from its seed parts at any point.
// The mixer is the splitmix64 finalizer.
class CounterRng {
public:
    explicit CounterRng(std::initializer_list<std::uint64_t> seed_parts) {
        std::uint64_t k = 0;
        std::uint64_t i = 1;
        for (std::uint64_t p : seed_parts) {
            k = mix(k ^ mix(p + i * kGolden));
            ++i;
        }
        key_ = k;
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

    // Uniform double in [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform double in [lo, hi].
    double next_range(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

// Convenience for deriving sub-seeds from a master seed.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    CounterRng rng(parts);
    return rng.next_u64();
}

// In-place Fisher-Yates shuffle driven by the given stream.
template <typename T>
void fisher_yates(std::vector<T>& items, CounterRng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace pht
