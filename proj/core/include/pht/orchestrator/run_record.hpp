#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pht/learner/train.hpp"

namespace pht::orch {

struct EpochRow {
    std::uint64_t global_epoch = 0; // 1-based; FL runs count rounds here
    int station_id = -1;            // -1 for centralized / aggregated rows
    double train_loss = 0.0;
    learner::EpochEval validation;
};

struct RunEvent {
    std::uint64_t seq = 0; // logical clock, strictly increasing per run
    std::string kind;      // run_start, visit_start, hop, round, failure, run_end
    std::uint64_t global_epoch = 0;
    int station_id = -1;
    std::int64_t wall_ms = 0; // informational; not part of deterministic artifacts
};

struct TestEval {
    double loss = 0.0;
    double mean_accuracy = 0.0;
    double mean_recall = 0.0;
    double mean_accuracy_literal = 0.0;
};

struct RunRecord {
    std::string policy;
    std::string run_id;
    std::uint64_t seed = 0;
    std::vector<EpochRow> epochs;
    std::vector<RunEvent> events;
    std::optional<TestEval> final_test;
    std::optional<learner::ModelParameters> final_params;
    bool completed = false;
    std::string failure;
};

} // namespace pht::orch
