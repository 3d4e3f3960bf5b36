#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "pht/fhir/station.hpp"
#include "pht/harness/config.hpp"
#include "pht/harness/dataset.hpp"
#include "pht/metrics/report.hpp"
#include "pht/orchestrator/orchestrator.hpp"

namespace pht::harness {

struct PolicyRun {
    std::string name; // artifact file stem, e.g. "iil"
    orch::RunRecord record;
    nlohmann::json summary;
    std::filesystem::path trace_csv;
    std::filesystem::path summary_json;
};

struct ExperimentOutcome {
    std::string config_digest;
    partition::Partition partition;
    std::filesystem::path partition_manifest;
    std::vector<PolicyRun> runs;
    bool all_completed = true;
};

// Materialized experiment state, exposed so tests and the acceptance
// suite can drive runs piecewise (stations stay alive for inspection).
class Experiment {
public:
    Experiment(ExperimentConfig config);

    const ExperimentConfig& config() const { return config_; }
    const Dataset& dataset() const { return dataset_; }
    const partition::Partition& partition() const { return partition_; }
    std::vector<fhir::Station*> stations();
    const std::string& experiment_name() const { return experiment_name_; }

    train::TaskConfig task_config(const PlanConfig& plan) const;
    orch::ExperimentPlan orchestration_plan(const PlanConfig& plan) const;

    // Preprocessed, non-augmented source over the held-out test pool.
    const learner::TrainingSource& test_source() const { return *test_source_; }

    // Pooled train/validation sources for the centralized baseline.
    const learner::TrainingSource& pooled_training() const { return *pooled_training_; }
    const learner::TrainingSource& pooled_validation() const { return *pooled_validation_; }

    // Executes one plan; the wire log is filled for distributed policies.
    orch::RunRecord run_plan(const PlanConfig& plan, const std::string& run_id,
                             orch::WireLog* wire_log);

    // Raw blob bytes ingested at each station, for locality scans.
    std::vector<std::vector<std::uint8_t>> ingested_blobs() const;

    train::TrainRegistry& registry() { return registry_; }

private:
    std::unique_ptr<learner::TrainingSource> source_for_ids(
        const std::vector<std::string>& ids, bool augmented,
        std::uint64_t augment_seed) const;

    ExperimentConfig config_;
    Dataset dataset_;
    partition::Partition partition_;
    std::string experiment_name_;
    std::vector<std::unique_ptr<fhir::Station>> stations_;
    train::TrainRegistry registry_;
    std::unique_ptr<learner::TrainingSource> test_source_;
    std::unique_ptr<learner::TrainingSource> pooled_training_;
    std::unique_ptr<learner::TrainingSource> pooled_validation_;
};

// The full CLI `run` pipeline: load, partition, ingest, run every plan,
// write partition manifest + per-plan trace CSV + summary JSON + event
// log + wire log under output_dir.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& output_dir);

} // namespace pht::harness
