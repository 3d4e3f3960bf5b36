#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pht/common/errors.hpp"

namespace pht {

// The eight dermoscopic diagnosis codes handled by stations, in canonical
// order. Class indices used by the learner and metrics refer to positions
// in this list (or in a user-supplied ClassSet).
inline const std::array<std::string_view, 8> kDiagnosisCodes = {
    "MEL", "NV", "BCC", "AK", "BKL", "DF", "VASC", "SCC"};

inline bool is_diagnosis_code(std::string_view code) {
    for (auto c : kDiagnosisCodes) {
        if (c == code) return true;
    }
    return false;
}

// Ordered set of class labels; maps codes to dense indices.
class ClassSet {
public:
    ClassSet() = default;
    explicit ClassSet(std::vector<std::string> codes) : codes_(std::move(codes)) {}

    static ClassSet diagnosis_codes() {
        std::vector<std::string> v;
        v.reserve(kDiagnosisCodes.size());
        for (auto c : kDiagnosisCodes) v.emplace_back(c);
        return ClassSet(std::move(v));
    }

    std::size_t size() const { return codes_.size(); }
    const std::string& code(std::size_t index) const { return codes_.at(index); }
    const std::vector<std::string>& codes() const { return codes_; }

    std::size_t index_of(std::string_view code) const {
        for (std::size_t i = 0; i < codes_.size(); ++i) {
            if (codes_[i] == code) return i;
        }
        throw NotFoundError("unknown class label: " + std::string(code));
    }

    bool contains(std::string_view code) const {
        for (const auto& c : codes_) {
            if (c == code) return true;
        }
        return false;
    }

private:
    std::vector<std::string> codes_;
};

} // namespace pht
