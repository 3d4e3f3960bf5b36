#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "pht/common/errors.hpp"

namespace pht::metrics {

// C x C count matrix, counts[true][predicted]. Single writer; merge two
// matrices with merge() for parallel evaluation.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t num_classes);

    void accumulate(std::size_t true_label, std::size_t predicted_label);
    void merge(const ConfusionMatrix& other);

    std::size_t num_classes() const { return classes_; }
    std::uint64_t at(std::size_t true_label, std::size_t predicted_label) const;
    std::uint64_t total() const { return total_; }

    std::uint64_t row_sum(std::size_t true_label) const;
    std::uint64_t col_sum(std::size_t predicted_label) const;

    struct ClassCounts {
        std::uint64_t tp = 0;
        std::uint64_t fn = 0;
        std::uint64_t fp = 0;
        std::uint64_t tn = 0;
    };
    ClassCounts class_counts(std::size_t label) const;

private:
    void check_label(std::size_t label) const;

    std::size_t classes_;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> counts_; // row-major [true * classes_ + predicted]
};

// Unweighted mean of per-class recall TP_i / (TP_i + FN_i). Classes with no
// support are excluded from the mean; their indices are reported through
// `zero_support` when provided.
double mean_recall(const ConfusionMatrix& cm,
                   std::vector<std::size_t>* zero_support = nullptr);

// The accuracy formula exactly as printed: (1/C) * sum TP_i / total, which
// algebraically equals overall_accuracy / C. Kept for fidelity; bounded by
// 1/C even for a perfect classifier.
double mean_accuracy_literal(const ConfusionMatrix& cm);

// Conventional per-class accuracy: (1/C) * sum (TP_i + TN_i) / total.
// This is the variant experiment reports use.
double mean_accuracy_per_class(const ConfusionMatrix& cm);

// Fraction of samples on the diagonal.
double overall_accuracy(const ConfusionMatrix& cm);

} // namespace pht::metrics
