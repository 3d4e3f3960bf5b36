#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pht/learner/params.hpp"

namespace pht::learner {

// Small multiclass classifier: softmax regression, optionally with one
// tanh hidden layer. Stands in for the deep models a real deployment
// would ship inside the Train.
struct ModelShape {
    std::uint64_t input_dim = 0;
    std::uint64_t num_classes = 0;
    std::uint64_t hidden_width = 0; // 0 = plain softmax regression

    bool operator==(const ModelShape&) const = default;
};

struct LabeledSample {
    std::vector<double> features;
    int label = 0;
};

// Zeros for softmax regression; the hidden weight matrix is drawn from a
// scaled uniform when hidden_width > 0. Deterministic under seed.
ModelParameters init_parameters(const ModelShape& shape, std::uint64_t seed);

// Recovers the architecture from the named tensor shapes.
ModelShape shape_of(const ModelParameters& params);

// Per-sample class-probability vectors. Each output is non-negative and
// sums to 1 within 1e-9. Throws ConfigError on an empty batch or a
// feature-length mismatch.
std::vector<std::vector<double>> forward(const ModelParameters& params,
                                         std::span<const LabeledSample> batch);

std::vector<double> forward_one(const ModelParameters& params,
                                std::span<const double> features);

// Mean negative log-probability of the true classes. True-class
// probabilities are clamped at kProbabilityFloor so the result is never
// infinite.
inline constexpr double kProbabilityFloor = 1e-12;
double cross_entropy(const std::vector<std::vector<double>>& probabilities,
                     std::span<const int> labels);

// Mean cross-entropy over the batch plus its analytic gradient with the L2
// term weight_decay * theta added. The returned loss is the plain
// cross-entropy (the L2 term only enters the gradient).
double loss_and_gradient(const ModelParameters& params,
                         std::span<const LabeledSample> batch,
                         double weight_decay,
                         std::vector<double>& gradient);

// Argmax class; ties resolve to the lowest index.
int predict(const ModelParameters& params, std::span<const double> features);

} // namespace pht::learner
