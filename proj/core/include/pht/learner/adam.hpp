#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pht/learner/params.hpp"

namespace pht::learner {

struct TrainingConfig {
    std::uint64_t epochs = 40;
    double learning_rate = 0.0001;
    double weight_decay = 0.0005;
    std::uint64_t batch_size = 16;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    // When false (the default) the optimizer state is reset at every
    // station hop; when true it travels inside the Train bundle.
    bool carry_optimizer_state = false;

    void validate() const;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t step = 0;

    static AdamState zeros(std::size_t n) { return {std::vector<double>(n, 0.0),
                                                    std::vector<double>(n, 0.0), 0}; }

    std::vector<std::uint8_t> serialize() const;
    static AdamState deserialize(std::span<const std::uint8_t> bytes);

    bool operator==(const AdamState&) const = default;
};

// One Adam update with bias correction. The gradient is taken as given
// (the L2 weight-decay term is added by the gradient computation).
// A non-finite gradient entry rejects the step: params and state are left
// untouched and a DataError identifying the entry is thrown.
void adam_step(ModelParameters& params, std::span<const double> gradient,
               AdamState& state, const TrainingConfig& config);

} // namespace pht::learner
