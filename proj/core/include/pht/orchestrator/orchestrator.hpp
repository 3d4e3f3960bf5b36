#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pht/fhir/station.hpp"
#include "pht/orchestrator/run_record.hpp"
#include "pht/orchestrator/wire_log.hpp"
#include "pht/train/registry.hpp"

namespace pht::orch {

enum class Policy { IIL, CyclicIIL, FL, Centralized };

std::string policy_name(Policy policy);
Policy policy_from_name(const std::string& name);

enum class Weighting { Uniform, BySampleCount };

struct ExperimentPlan {
    Policy policy = Policy::IIL;
    std::vector<std::uint32_t> stations; // visit order for IIL
    std::uint64_t cycles = 1;            // route repetitions (CyclicIIL)
    std::uint64_t rounds = 1;            // FL aggregation rounds
    std::uint64_t local_epochs = 40;     // epochs per visit / round / run
    Weighting weighting = Weighting::BySampleCount;
    std::uint64_t seed = 0;

    void validate() const;
};

// Element-wise weighted arithmetic mean; weights are normalized
// internally, so scaling them all by a constant changes nothing.
// Identical replicas return the first replica exactly.
learner::ModelParameters aggregate(std::span<const learner::ModelParameters> replicas,
                                   std::span<const double> weights);

// Sequential policy: the Train visits each station in route order,
// cycles times, pulled and pushed through the registry around every
// visit. Fail-stop: a station failure aborts with a partial record.
RunRecord run_iil(const ExperimentPlan& plan, const train::TaskConfig& task,
                  std::span<fhir::Station* const> stations,
                  train::TrainRegistry& registry, WireLog* wire_log,
                  const learner::TrainingSource* test_source,
                  const std::string& run_id);

// Parallel policy: per round, broadcast the current parameters, run local
// epochs at every station concurrently, and aggregate the replicas by
// weighted parameter mean. Aggregation is a barrier between rounds.
RunRecord run_fl(const ExperimentPlan& plan, const train::TaskConfig& task,
                 std::span<fhir::Station* const> stations, WireLog* wire_log,
                 const learner::TrainingSource* test_source,
                 const std::string& run_id);

// Baseline: one local training run over the pooled shards.
RunRecord run_centralized(const ExperimentPlan& plan, const train::TaskConfig& task,
                          const learner::TrainingSource& pooled_training,
                          const learner::TrainingSource* pooled_validation,
                          const learner::TrainingSource* test_source,
                          const std::string& run_id);

// Final-model evaluation shared by all policies.
TestEval evaluate_test(const learner::ModelParameters& params,
                       const learner::TrainingSource& test_source);

} // namespace pht::orch
