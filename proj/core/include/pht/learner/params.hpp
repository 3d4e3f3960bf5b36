#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pht::learner {

struct TensorShape {
    std::string name;
    std::vector<std::uint64_t> dims;

    std::uint64_t element_count() const {
        std::uint64_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }

    bool operator==(const TensorShape&) const = default;
};

// Flat numeric parameter vector plus shape metadata. This is the state a
// Train carries between stations; version increases on every commit.
struct ModelParameters {
    std::vector<double> values;
    std::vector<TensorShape> shapes;
    std::uint64_t version = 1;

    std::size_t size() const { return values.size(); }

    std::uint64_t declared_element_count() const {
        std::uint64_t n = 0;
        for (const auto& s : shapes) n += s.element_count();
        return n;
    }

    bool all_finite() const;

    // Throws ConfigError when the value count disagrees with the shapes.
    void validate() const;

    // Binary layout: varint version, varint shape count, per shape
    // (name as varint-length UTF-8, varint dim count, varint dims),
    // varint value count, then 64-bit little-endian IEEE doubles.
    // Round-trips bit-exactly.
    std::vector<std::uint8_t> serialize() const;
    static ModelParameters deserialize(std::span<const std::uint8_t> bytes);

    bool operator==(const ModelParameters&) const = default;
};

} // namespace pht::learner
