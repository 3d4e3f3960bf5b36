#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pht/learner/adam.hpp"
#include "pht/learner/model.hpp"
#include "pht/metrics/confusion.hpp"

namespace pht::learner {

// Feed of labeled feature vectors. The epoch argument lets a source apply
// per-epoch augmentation; plain sources ignore it.
class TrainingSource {
public:
    virtual ~TrainingSource() = default;
    virtual std::size_t size() const = 0;
    virtual std::size_t feature_dim() const = 0;
    virtual LabeledSample sample(std::size_t index, std::uint64_t epoch) const = 0;
};

class InMemorySource final : public TrainingSource {
public:
    InMemorySource() = default;
    explicit InMemorySource(std::vector<LabeledSample> samples)
        : samples_(std::move(samples)) {}

    std::size_t size() const override { return samples_.size(); }
    std::size_t feature_dim() const override {
        return samples_.empty() ? 0 : samples_[0].features.size();
    }
    LabeledSample sample(std::size_t index, std::uint64_t) const override {
        return samples_.at(index);
    }

    const std::vector<LabeledSample>& samples() const { return samples_; }

private:
    std::vector<LabeledSample> samples_;
};

struct EpochEval {
    double loss = 0.0;
    double mean_accuracy = 0.0; // per-class accuracy variant
    double mean_recall = 0.0;
};

struct LocalTrainResult {
    ModelParameters params;
    AdamState optimizer;
    std::vector<double> train_loss;    // one entry per completed epoch
    std::vector<EpochEval> validation; // parallel to train_loss when a
                                       // validation source was given
    bool diverged = false;
};

// Epoch-based minibatch training. Shuffle order is a per-epoch
// Fisher-Yates draw from a counter-based PRNG keyed on
// (config.seed, epoch_base + epoch), so identical inputs give
// bit-identical parameters. The last partial minibatch is used.
// A NaN loss or non-finite gradient aborts with the partial trace and
// diverged = true. The returned parameters carry an incremented version.
LocalTrainResult train_local(const ModelParameters& start,
                             const TrainingSource& training,
                             const TrainingSource* validation,
                             const TrainingConfig& config,
                             std::uint64_t epoch_base = 0,
                             const AdamState* initial_state = nullptr);

// Loss and metrics of `params` over a source (no augmentation intent:
// callers pass epoch 0).
EpochEval evaluate(const ModelParameters& params, const TrainingSource& source);

// Confusion matrix of argmax predictions over a source.
metrics::ConfusionMatrix evaluate_confusion(const ModelParameters& params,
                                            const TrainingSource& source);

} // namespace pht::learner
