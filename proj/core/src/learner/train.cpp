#include "pht/learner/train.hpp"

#include <cmath>
#include <numeric>

#include "pht/common/errors.hpp"
#include "pht/common/rng.hpp"

namespace pht::learner {

namespace {
constexpr std::uint64_t kShuffleTag = 0x73687566; // "shuf"
} // namespace

metrics::ConfusionMatrix evaluate_confusion(const ModelParameters& params,
                                            const TrainingSource& source) {
    const ModelShape shape = shape_of(params);
    metrics::ConfusionMatrix cm(shape.num_classes);
    for (std::size_t i = 0; i < source.size(); ++i) {
        LabeledSample s = source.sample(i, 0);
        int pred = predict(params, s.features);
        cm.accumulate(static_cast<std::size_t>(s.label), static_cast<std::size_t>(pred));
    }
    return cm;
}

EpochEval evaluate(const ModelParameters& params, const TrainingSource& source) {
    const ModelShape shape = shape_of(params);
    metrics::ConfusionMatrix cm(shape.num_classes);
    double loss_sum = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        LabeledSample s = source.sample(i, 0);
        std::vector<double> probs = forward_one(params, s.features);
        const std::size_t y = static_cast<std::size_t>(s.label);
        loss_sum += -std::log(std::max(probs[y], kProbabilityFloor));
        std::size_t pred = 0;
        for (std::size_t c = 1; c < probs.size(); ++c) {
            if (probs[c] > probs[pred]) pred = c;
        }
        cm.accumulate(y, pred);
    }
    EpochEval e;
    e.loss = source.size() ? loss_sum / static_cast<double>(source.size()) : 0.0;
    e.mean_accuracy = metrics::mean_accuracy_per_class(cm);
    e.mean_recall = metrics::mean_recall(cm);
    return e;
}

LocalTrainResult train_local(const ModelParameters& start,
                             const TrainingSource& training,
                             const TrainingSource* validation,
                             const TrainingConfig& config,
                             std::uint64_t epoch_base,
                             const AdamState* initial_state) {
    config.validate();
    if (training.size() == 0) throw ConfigError("empty training split");

    LocalTrainResult result;
    result.params = start;
    result.params.validate();
    const ModelShape shape = shape_of(result.params);
    if (training.feature_dim() != shape.input_dim) {
        throw ConfigError("training features do not match model input dimension");
    }
    result.optimizer =
        initial_state ? *initial_state : AdamState::zeros(result.params.size());

    const std::size_t n = training.size();
    std::vector<std::size_t> order(n);
    std::vector<LabeledSample> batch;
    std::vector<double> gradient;

    for (std::uint64_t e = 0; e < config.epochs; ++e) {
        const std::uint64_t global_epoch = epoch_base + e;
        std::iota(order.begin(), order.end(), std::size_t{0});
        CounterRng rng({config.seed, kShuffleTag, global_epoch});
        fisher_yates(order, rng);

        double loss_sum = 0.0;
        bool aborted = false;
        for (std::size_t off = 0; off < n; off += config.batch_size) {
            const std::size_t count = std::min<std::size_t>(config.batch_size, n - off);
            batch.clear();
            for (std::size_t i = 0; i < count; ++i) {
                batch.push_back(training.sample(order[off + i], global_epoch));
            }
            double loss;
            try {
                loss = loss_and_gradient(result.params, batch, config.weight_decay,
                                         gradient);
                if (!std::isfinite(loss)) throw DataError("non-finite training loss");
                adam_step(result.params, gradient, result.optimizer, config);
            } catch (const DataError&) {
                aborted = true;
                break;
            }
            loss_sum += loss * static_cast<double>(count);
        }
        if (aborted) {
            result.diverged = true;
            break;
        }
        result.train_loss.push_back(loss_sum / static_cast<double>(n));
        if (validation) result.validation.push_back(evaluate(result.params, *validation));
    }

    result.params.version = start.version + 1;
    return result;
}

} // namespace pht::learner
