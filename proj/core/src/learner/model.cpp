#include "pht/learner/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pht/common/errors.hpp"
#include "pht/common/rng.hpp"

namespace pht::learner {

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974; // "init"

// Flat-vector offsets for the two architectures.
struct Layout {
    ModelShape shape;
    std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0; // unused entries stay 0
};

Layout layout_of(const ModelParameters& params) {
    params.validate();
    Layout l;
    const auto& s = params.shapes;
    if (s.size() == 2 && s[0].name == "linear.weight" && s[1].name == "linear.bias") {
        if (s[0].dims.size() != 2 || s[1].dims.size() != 1 || s[0].dims[0] != s[1].dims[0]) {
            throw ConfigError("malformed softmax parameter shapes");
        }
        l.shape = {s[0].dims[1], s[0].dims[0], 0};
        l.w1 = 0;
        l.b1 = s[0].element_count();
        return l;
    }
    if (s.size() == 4 && s[0].name == "hidden.weight" && s[1].name == "hidden.bias" &&
        s[2].name == "output.weight" && s[3].name == "output.bias") {
        if (s[0].dims.size() != 2 || s[2].dims.size() != 2 ||
            s[0].dims[0] != s[1].dims[0] || s[2].dims[1] != s[0].dims[0] ||
            s[2].dims[0] != s[3].dims[0]) {
            throw ConfigError("malformed MLP parameter shapes");
        }
        l.shape = {s[0].dims[1], s[2].dims[0], s[0].dims[0]};
        l.w1 = 0;
        l.b1 = s[0].element_count();
        l.w2 = l.b1 + s[1].element_count();
        l.b2 = l.w2 + s[2].element_count();
        return l;
    }
    throw ConfigError("unrecognized model parameter shapes");
}

void check_features(const Layout& l, std::size_t got) {
    if (got != l.shape.input_dim) {
        throw ConfigError("feature length " + std::to_string(got) +
                          " does not match model input dimension " +
                          std::to_string(l.shape.input_dim));
    }
}

void softmax_inplace(std::vector<double>& logits) {
    double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - m);
        sum += v;
    }
    for (double& v : logits) v /= sum;
}

// Logits plus, for the MLP, the hidden activations needed by backprop.
void compute_logits(const ModelParameters& p, const Layout& l,
                    std::span<const double> x,
                    std::vector<double>& hidden, std::vector<double>& logits) {
    const std::size_t d = l.shape.input_dim;
    const std::size_t c = l.shape.num_classes;
    const std::size_t h = l.shape.hidden_width;
    logits.assign(c, 0.0);
    if (h == 0) {
        for (std::size_t i = 0; i < c; ++i) {
            double acc = p.values[l.b1 + i];
            const double* w = &p.values[l.w1 + i * d];
            for (std::size_t j = 0; j < d; ++j) acc += w[j] * x[j];
            logits[i] = acc;
        }
        return;
    }
    hidden.assign(h, 0.0);
    for (std::size_t i = 0; i < h; ++i) {
        double acc = p.values[l.b1 + i];
        const double* w = &p.values[l.w1 + i * d];
        for (std::size_t j = 0; j < d; ++j) acc += w[j] * x[j];
        hidden[i] = std::tanh(acc);
    }
    for (std::size_t i = 0; i < c; ++i) {
        double acc = p.values[l.b2 + i];
        const double* w = &p.values[l.w2 + i * h];
        for (std::size_t j = 0; j < h; ++j) acc += w[j] * hidden[j];
        logits[i] = acc;
    }
}

} // namespace

ModelParameters init_parameters(const ModelShape& shape, std::uint64_t seed) {
    if (shape.input_dim == 0 || shape.num_classes < 2) {
        throw ConfigError("model needs input_dim >= 1 and num_classes >= 2");
    }
    ModelParameters p;
    if (shape.hidden_width == 0) {
        p.shapes = {{"linear.weight", {shape.num_classes, shape.input_dim}},
                    {"linear.bias", {shape.num_classes}}};
        p.values.assign(p.declared_element_count(), 0.0);
        return p;
    }
    p.shapes = {{"hidden.weight", {shape.hidden_width, shape.input_dim}},
                {"hidden.bias", {shape.hidden_width}},
                {"output.weight", {shape.num_classes, shape.hidden_width}},
                {"output.bias", {shape.num_classes}}};
    p.values.assign(p.declared_element_count(), 0.0);
    CounterRng rng({seed, kInitTag});
    const double bound = 1.0 / std::sqrt(static_cast<double>(shape.input_dim));
    const std::size_t w1_count = shape.hidden_width * shape.input_dim;
    for (std::size_t i = 0; i < w1_count; ++i) {
        p.values[i] = rng.next_range(-bound, bound);
    }
    return p;
}

ModelShape shape_of(const ModelParameters& params) { return layout_of(params).shape; }

std::vector<double> forward_one(const ModelParameters& params,
                                std::span<const double> features) {
    Layout l = layout_of(params);
    check_features(l, features.size());
    std::vector<double> hidden, logits;
    compute_logits(params, l, features, hidden, logits);
    softmax_inplace(logits);
    return logits;
}

std::vector<std::vector<double>> forward(const ModelParameters& params,
                                         std::span<const LabeledSample> batch) {
    if (batch.empty()) throw ConfigError("forward on empty batch");
    Layout l = layout_of(params);
    std::vector<std::vector<double>> out;
    out.reserve(batch.size());
    std::vector<double> hidden, logits;
    for (const auto& sample : batch) {
        check_features(l, sample.features.size());
        compute_logits(params, l, sample.features, hidden, logits);
        softmax_inplace(logits);
        out.push_back(logits);
    }
    return out;
}

double cross_entropy(const std::vector<std::vector<double>>& probabilities,
                     std::span<const int> labels) {
    if (probabilities.empty()) throw ConfigError("cross_entropy on empty batch");
    if (probabilities.size() != labels.size()) {
        throw ConfigError("probability/label count mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const auto& p = probabilities[i];
        int y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= p.size()) {
            throw ConfigError("label " + std::to_string(y) + " out of range");
        }
        sum += -std::log(std::max(p[static_cast<std::size_t>(y)], kProbabilityFloor));
    }
    return sum / static_cast<double>(probabilities.size());
}

double loss_and_gradient(const ModelParameters& params,
                         std::span<const LabeledSample> batch,
                         double weight_decay,
                         std::vector<double>& gradient) {
    if (batch.empty()) throw ConfigError("loss_and_gradient on empty batch");
    Layout l = layout_of(params);
    const std::size_t d = l.shape.input_dim;
    const std::size_t c = l.shape.num_classes;
    const std::size_t h = l.shape.hidden_width;

    gradient.assign(params.size(), 0.0);
    double loss_sum = 0.0;
    std::vector<double> hidden, logits, dpre;
    for (const auto& sample : batch) {
        check_features(l, sample.features.size());
        if (sample.label < 0 || static_cast<std::size_t>(sample.label) >= c) {
            throw ConfigError("label " + std::to_string(sample.label) + " out of range");
        }
        compute_logits(params, l, sample.features, hidden, logits);
        softmax_inplace(logits);
        const std::size_t y = static_cast<std::size_t>(sample.label);
        loss_sum += -std::log(std::max(logits[y], kProbabilityFloor));

        // dL/dlogit = p - onehot(y), per sample
        logits[y] -= 1.0;
        const std::span<const double> x = sample.features;
        if (h == 0) {
            for (std::size_t i = 0; i < c; ++i) {
                const double g = logits[i];
                double* gw = &gradient[l.w1 + i * d];
                for (std::size_t j = 0; j < d; ++j) gw[j] += g * x[j];
                gradient[l.b1 + i] += g;
            }
        } else {
            for (std::size_t i = 0; i < c; ++i) {
                const double g = logits[i];
                double* gw = &gradient[l.w2 + i * h];
                for (std::size_t j = 0; j < h; ++j) gw[j] += g * hidden[j];
                gradient[l.b2 + i] += g;
            }
            dpre.assign(h, 0.0);
            for (std::size_t j = 0; j < h; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < c; ++i) {
                    acc += params.values[l.w2 + i * h + j] * logits[i];
                }
                dpre[j] = acc * (1.0 - hidden[j] * hidden[j]);
            }
            for (std::size_t i = 0; i < h; ++i) {
                const double g = dpre[i];
                double* gw = &gradient[l.w1 + i * d];
                for (std::size_t j = 0; j < d; ++j) gw[j] += g * x[j];
                gradient[l.b1 + i] += g;
            }
        }
    }

    const double inv_b = 1.0 / static_cast<double>(batch.size());
    for (std::size_t i = 0; i < gradient.size(); ++i) {
        gradient[i] = gradient[i] * inv_b + weight_decay * params.values[i];
    }
    return loss_sum * inv_b;
}

int predict(const ModelParameters& params, std::span<const double> features) {
    std::vector<double> probs = forward_one(params, features);
    return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

} // namespace pht::learner
