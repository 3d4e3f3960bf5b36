#include "pht/learner/adam.hpp"

#include <cmath>
#include <string>

#include "pht/common/binio.hpp"
#include "pht/common/errors.hpp"

namespace pht::learner {

void TrainingConfig::validate() const {
    if (learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
    if (weight_decay < 0.0) throw ConfigError("weight_decay must be non-negative");
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must be in (0, 1)");
    if (!(beta2 > 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must be in (0, 1)");
    if (epsilon <= 0.0) throw ConfigError("epsilon must be positive");
}

std::vector<std::uint8_t> AdamState::serialize() const {
    ByteWriter w;
    w.varint(step);
    w.varint(m.size());
    for (double x : m) w.f64(x);
    for (double x : v) w.f64(x);
    return w.take();
}

AdamState AdamState::deserialize(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    AdamState s;
    s.step = r.varint();
    std::uint64_t n = r.varint();
    s.m.reserve(n);
    s.v.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) s.m.push_back(r.f64());
    for (std::uint64_t i = 0; i < n; ++i) s.v.push_back(r.f64());
    if (!r.done()) throw DataError("trailing bytes in optimizer state");
    return s;
}

void adam_step(ModelParameters& params, std::span<const double> gradient,
               AdamState& state, const TrainingConfig& config) {
    config.validate();
    const std::size_t n = params.size();
    if (gradient.size() != n) {
        throw ConfigError("gradient length " + std::to_string(gradient.size()) +
                          " does not match parameter count " + std::to_string(n));
    }
    if (state.m.size() != n || state.v.size() != n) {
        throw ConfigError("optimizer state size does not match parameter count");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(gradient[i])) {
            throw DataError("step rejected: non-finite gradient at index " +
                            std::to_string(i));
        }
    }

    const std::uint64_t t = state.step + 1;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < n; ++i) {
        const double g = gradient[i];
        state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
        state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params.values[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
    state.step = t;

    if (!params.all_finite()) {
        throw DataError("non-finite parameter after Adam update");
    }
}

} // namespace pht::learner
