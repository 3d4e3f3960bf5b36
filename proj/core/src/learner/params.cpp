#include "pht/learner/params.hpp"

#include <cmath>
#include <string>

#include "pht/common/binio.hpp"
#include "pht/common/errors.hpp"

namespace pht::learner {

bool ModelParameters::all_finite() const {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void ModelParameters::validate() const {
    if (declared_element_count() != values.size()) {
        throw ConfigError("parameter count " + std::to_string(values.size()) +
                          " does not match shapes (" +
                          std::to_string(declared_element_count()) + " expected)");
    }
}

std::vector<std::uint8_t> ModelParameters::serialize() const {
    ByteWriter w;
    w.varint(version);
    w.varint(shapes.size());
    for (const auto& s : shapes) {
        w.str(s.name);
        w.varint(s.dims.size());
        for (auto d : s.dims) w.varint(d);
    }
    w.varint(values.size());
    for (double v : values) w.f64(v);
    return w.take();
}

ModelParameters ModelParameters::deserialize(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    ModelParameters p;
    p.version = r.varint();
    std::uint64_t shape_count = r.varint();
    p.shapes.reserve(shape_count);
    for (std::uint64_t i = 0; i < shape_count; ++i) {
        TensorShape s;
        s.name = r.str();
        std::uint64_t ndims = r.varint();
        s.dims.reserve(ndims);
        for (std::uint64_t d = 0; d < ndims; ++d) s.dims.push_back(r.varint());
        p.shapes.push_back(std::move(s));
    }
    std::uint64_t count = r.varint();
    if (r.remaining() != count * sizeof(double)) {
        throw DataError("parameter payload length mismatch");
    }
    p.values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) p.values.push_back(r.f64());
    p.validate();
    return p;
}

} // namespace pht::learner
