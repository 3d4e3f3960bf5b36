#include "pht/metrics/report.hpp"

#include <cstdio>
#include <map>

namespace pht::metrics {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<TraceRow> loss_trace_report(const orch::RunRecord& record) {
    std::map<std::uint64_t, std::string> markers;
    for (const auto& event : record.events) {
        if (event.kind == "hop" || event.kind == "round") {
            markers[event.global_epoch] = event.kind;
        }
    }
    std::vector<TraceRow> rows;
    rows.reserve(record.epochs.size());
    for (const auto& e : record.epochs) {
        TraceRow row;
        row.epoch = e.global_epoch;
        row.loss = e.train_loss;
        row.mean_accuracy = e.validation.mean_accuracy;
        row.mean_recall = e.validation.mean_recall;
        auto it = markers.find(e.global_epoch);
        if (it != markers.end()) row.marker = it->second;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows,
                     const std::string& config_digest) {
    out << "# config_digest=" << config_digest << "\n";
    out << "epoch,loss,mean_accuracy,mean_recall,marker\n";
    for (const auto& row : rows) {
        out << row.epoch << ',' << format_double(row.loss) << ','
            << format_double(row.mean_accuracy) << ',' << format_double(row.mean_recall)
            << ',' << row.marker << '\n';
    }
}

nlohmann::json summary_json(const orch::RunRecord& record,
                            const std::string& config_digest,
                            std::size_t class_count) {
    nlohmann::json j = {{"policy", record.policy},
                        {"run_id", record.run_id},
                        {"seed", record.seed},
                        {"class_count", class_count},
                        {"config_digest", config_digest},
                        {"completed", record.completed}};
    if (!record.failure.empty()) j["failure"] = record.failure;
    if (record.final_test) {
        j["final_test"] = {{"mean_accuracy", record.final_test->mean_accuracy},
                           {"mean_recall", record.final_test->mean_recall},
                           {"mean_accuracy_literal", record.final_test->mean_accuracy_literal},
                           {"loss", record.final_test->loss}};
    }
    return j;
}

} // namespace pht::metrics
