#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pht/fhir/store.hpp"
#include "pht/learner/train.hpp"
#include "pht/partition/partitioner.hpp"
#include "pht/train/bundle.hpp"

namespace pht::fhir {

struct StationConfig {
    std::uint32_t station_id = 0;
    std::string resource_endpoint;
    std::string object_endpoint;
    std::string credentials_token;

    void validate() const;
    static StationConfig local(std::uint32_t station_id);
};

struct ExecutionOutcome {
    train::TrainBundle bundle; // committed on success, failure-recorded otherwise
    bool success = false;
    std::string error;
    std::vector<double> train_loss;
    std::vector<learner::EpochEval> validation;
};

struct ReplicaOutcome {
    learner::ModelParameters params;
    std::uint64_t sample_count = 0;
    bool success = false;
    std::string error;
    std::vector<double> train_loss;
    std::vector<learner::EpochEval> validation;
};

// A data provider: FHIR-lite resource store plus blob store plus the local
// execution environment. Data ingested here never leaves; Trains come to
// it and only parameters and provenance go back out.
class Station {
public:
    Station(StationConfig config, partition::DatasetShard shard);

    // Populates the stores from the shard's samples (training +
    // validation). Returns the study id.
    std::string ingest_samples(const std::string& experiment_name,
                               std::span<const IngestSample> samples);

    // The IIL visit: resolve the study, preprocess, train locally,
    // snapshot-commit. Resolution or training failures return the bundle
    // unmodified except for a recorded failure. A bundle that does not
    // list this station next on its route is rejected with ConfigError.
    ExecutionOutcome execute_train(const train::TrainBundle& bundle);

    // The FL replica step: local epochs from broadcast parameters.
    ReplicaOutcome run_replica(const learner::ModelParameters& params,
                               const train::TaskConfig& task, std::uint64_t round);

    std::uint32_t station_id() const { return config_.station_id; }
    std::uint64_t training_sample_count() const { return shard_.training.size(); }
    const partition::DatasetShard& shard() const { return shard_; }
    const std::string& study_id() const { return study_id_; }

    StationStore& store() { return store_; }
    const StationStore& store() const { return store_; }
    ObjectStore& objects() { return objects_; }
    const ObjectStore& objects() const { return objects_; }

    // Augmentation stream key for this station under a task; exposed so
    // an equivalent local run can reproduce a visit exactly.
    static std::uint64_t augment_seed(const train::TaskConfig& task,
                                      std::uint32_t station_id);
    // Per-station shuffle seed used by FL replicas.
    static std::uint64_t replica_seed(const train::TaskConfig& task,
                                      std::uint32_t station_id);

private:
    struct LocalSources {
        std::unique_ptr<learner::TrainingSource> training;
        std::unique_ptr<learner::TrainingSource> validation;
    };
    LocalSources resolve_sources(const train::TaskConfig& task) const;

    StationConfig config_;
    partition::DatasetShard shard_;
    StationStore store_;
    ObjectStore objects_;
    std::string study_id_;
};

} // namespace pht::fhir
