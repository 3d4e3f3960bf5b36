#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pht/orchestrator/run_record.hpp"

namespace pht::metrics {

struct TraceRow {
    std::uint64_t epoch = 0;
    double loss = 0.0;
    double mean_accuracy = 0.0;
    double mean_recall = 0.0;
    std::string marker; // "hop" / "round" at boundaries, else empty
};

// One row per recorded epoch; hop/round markers taken from the run's
// event log. An empty record gives an empty table.
std::vector<TraceRow> loss_trace_report(const orch::RunRecord& record);

// CSV columns: epoch,loss,mean_accuracy,mean_recall,marker. The leading
// comment line embeds the config digest so artifacts are self-describing.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows,
                     const std::string& config_digest);

nlohmann::json summary_json(const orch::RunRecord& record,
                            const std::string& config_digest,
                            std::size_t class_count);

// Fixed-precision, locale-independent float formatting used by all
// deterministic artifacts.
std::string format_double(double v);

} // namespace pht::metrics
