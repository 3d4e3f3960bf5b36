#include "pht/metrics/confusion.hpp"

#include <string>

namespace pht::metrics {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : classes_(num_classes), counts_(num_classes * num_classes, 0) {
    if (num_classes == 0) throw ConfigError("confusion matrix needs at least one class");
}

void ConfusionMatrix::check_label(std::size_t label) const {
    if (label >= classes_) {
        throw ConfigError("label " + std::to_string(label) + " out of range for " +
                          std::to_string(classes_) + " classes");
    }
}

void ConfusionMatrix::accumulate(std::size_t true_label, std::size_t predicted_label) {
    check_label(true_label);
    check_label(predicted_label);
    ++counts_[true_label * classes_ + predicted_label];
    ++total_;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
    if (other.classes_ != classes_) {
        throw ConfigError("cannot merge confusion matrices with different class counts");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
}

std::uint64_t ConfusionMatrix::at(std::size_t true_label, std::size_t predicted_label) const {
    check_label(true_label);
    check_label(predicted_label);
    return counts_[true_label * classes_ + predicted_label];
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t true_label) const {
    check_label(true_label);
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < classes_; ++p) s += counts_[true_label * classes_ + p];
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted_label) const {
    check_label(predicted_label);
    std::uint64_t s = 0;
    for (std::size_t t = 0; t < classes_; ++t) s += counts_[t * classes_ + predicted_label];
    return s;
}

ConfusionMatrix::ClassCounts ConfusionMatrix::class_counts(std::size_t label) const {
    check_label(label);
    ClassCounts c;
    c.tp = counts_[label * classes_ + label];
    c.fn = row_sum(label) - c.tp;
    c.fp = col_sum(label) - c.tp;
    c.tn = total_ - c.tp - c.fn - c.fp;
    return c;
}

double mean_recall(const ConfusionMatrix& cm, std::vector<std::size_t>* zero_support) {
    if (zero_support) zero_support->clear();
    double sum = 0.0;
    std::size_t supported = 0;
    for (std::size_t i = 0; i < cm.num_classes(); ++i) {
        auto c = cm.class_counts(i);
        if (c.tp + c.fn == 0) {
            if (zero_support) zero_support->push_back(i);
            continue;
        }
        sum += static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
        ++supported;
    }
    if (supported == 0) throw ConfigError("mean_recall on empty confusion matrix");
    return sum / static_cast<double>(supported);
}

double mean_accuracy_literal(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ConfigError("mean_accuracy_literal on empty confusion matrix");
    double sum = 0.0;
    for (std::size_t i = 0; i < cm.num_classes(); ++i) {
        auto c = cm.class_counts(i);
        sum += static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn + c.fp + c.tn);
    }
    return sum / static_cast<double>(cm.num_classes());
}

double mean_accuracy_per_class(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ConfigError("mean_accuracy_per_class on empty confusion matrix");
    double sum = 0.0;
    for (std::size_t i = 0; i < cm.num_classes(); ++i) {
        auto c = cm.class_counts(i);
        sum += static_cast<double>(c.tp + c.tn) / static_cast<double>(cm.total());
    }
    return sum / static_cast<double>(cm.num_classes());
}

double overall_accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ConfigError("overall_accuracy on empty confusion matrix");
    std::uint64_t diag = 0;
    for (std::size_t i = 0; i < cm.num_classes(); ++i) diag += cm.at(i, i);
    return static_cast<double>(diag) / static_cast<double>(cm.total());
}

} // namespace pht::metrics
