#include "pht/fhir/station.hpp"

#include <chrono>
#include <map>

#include "pht/common/labels.hpp"
#include "pht/common/rng.hpp"
#include "pht/preprocess/feature_source.hpp"

namespace pht::fhir {

namespace {
constexpr std::uint64_t kStationAugTag = 0x73746175; // "stau"
constexpr std::uint64_t kReplicaTag = 0x7265706c;    // "repl"
} // namespace

void StationConfig::validate() const {
    auto well_formed = [](const std::string& e) {
        return e.find("://") != std::string::npos;
    };
    if (!well_formed(resource_endpoint) || !well_formed(object_endpoint)) {
        throw ConfigError("station endpoints must be scheme://address URLs");
    }
}

StationConfig StationConfig::local(std::uint32_t station_id) {
    StationConfig c;
    c.station_id = station_id;
    c.resource_endpoint = "inproc://station-" + std::to_string(station_id) + "/fhir";
    c.object_endpoint = "inproc://station-" + std::to_string(station_id) + "/objects";
    c.credentials_token = "station-token-" + std::to_string(station_id);
    return c;
}

Station::Station(StationConfig config, partition::DatasetShard shard)
    : config_(std::move(config)), shard_(std::move(shard)) {
    config_.validate();
}

std::string Station::ingest_samples(const std::string& experiment_name,
                                    std::span<const IngestSample> samples) {
    study_id_ = ingest(store_, objects_, config_.station_id, experiment_name, samples);
    return study_id_;
}

std::uint64_t Station::augment_seed(const train::TaskConfig& task,
                                    std::uint32_t station_id) {
    return mix_seed({task.training.seed, kStationAugTag, station_id});
}

std::uint64_t Station::replica_seed(const train::TaskConfig& task,
                                    std::uint32_t station_id) {
    return mix_seed({task.training.seed, kReplicaTag, station_id});
}

Station::LocalSources Station::resolve_sources(const train::TaskConfig& task) const {
    if (study_id_.empty()) throw DataError("station has no ingested study");
    const std::vector<ResolvedSample> resolved =
        resolve_dataset(store_, objects_, study_id_);

    const ClassSet classes(task.classes);
    std::map<std::string, std::pair<preprocess::RawImage, int>> by_patient;
    for (const auto& r : resolved) {
        by_patient.emplace(r.patient_id,
                           std::make_pair(preprocess::preprocess(
                                              r.image, task.augment.target_size),
                                          static_cast<int>(classes.index_of(r.label))));
    }

    auto collect = [&](const std::vector<std::string>& sample_ids) {
        std::vector<std::pair<preprocess::RawImage, int>> out;
        out.reserve(sample_ids.size());
        for (const auto& sid : sample_ids) {
            auto it = by_patient.find(patient_id_for(sid));
            if (it == by_patient.end()) {
                throw DataError("shard sample " + sid + " is not part of study " +
                                study_id_);
            }
            out.push_back(it->second);
        }
        return out;
    };

    LocalSources sources;
    sources.training = std::make_unique<preprocess::ImageSource>(
        collect(shard_.training), task.augment,
        augment_seed(task, config_.station_id), /*augmented=*/true);
    sources.validation = std::make_unique<preprocess::ImageSource>(
        collect(shard_.validation), task.augment, 0, /*augmented=*/false);
    return sources;
}

ExecutionOutcome Station::execute_train(const train::TrainBundle& bundle) {
    bundle.verify();
    const train::TrainManifest& manifest = bundle.manifest();
    if (manifest.is_complete()) {
        throw ConfigError("train " + manifest.train_id + " has completed its route");
    }
    if (manifest.next_station() != config_.station_id) {
        throw ConfigError("train " + manifest.train_id + " is routed to station " +
                          std::to_string(manifest.next_station()) + ", not " +
                          std::to_string(config_.station_id));
    }

    LocalSources sources;
    try {
        sources = resolve_sources(manifest.task);
    } catch (const Error& e) {
        return {train::record_failure(bundle, {config_.station_id, e.what()}),
                false, e.what(), {}, {}};
    }

    const std::uint64_t epoch_base = manifest.cursor * manifest.task.training.epochs;
    const learner::AdamState* initial_state = nullptr;
    if (manifest.task.training.carry_optimizer_state && bundle.optimizer_state()) {
        initial_state = &*bundle.optimizer_state();
    }

    const auto started = std::chrono::steady_clock::now();
    learner::LocalTrainResult result =
        learner::train_local(bundle.parameters(), *sources.training,
                             sources.validation.get(), manifest.task.training,
                             epoch_base, initial_state);
    const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    if (result.diverged) {
        const std::string error = "training diverged with non-finite loss";
        return {train::record_failure(bundle, {config_.station_id, error}),
                false, error, result.train_loss, result.validation};
    }

    train::VisitRecord visit;
    visit.station_id = config_.station_id;
    visit.epochs_run = result.train_loss.size();
    if (!result.train_loss.empty()) visit.final_loss = result.train_loss.back();
    visit.wall_ms = static_cast<std::uint64_t>(wall_ms);

    train::TrainBundle committed =
        train::commit(bundle, std::move(result.params), std::move(visit),
                      manifest.task.training.carry_optimizer_state
                          ? std::optional<learner::AdamState>(result.optimizer)
                          : std::nullopt);
    return {std::move(committed), true, "", std::move(result.train_loss),
            std::move(result.validation)};
}

ReplicaOutcome Station::run_replica(const learner::ModelParameters& params,
                                    const train::TaskConfig& task, std::uint64_t round) {
    ReplicaOutcome outcome;
    outcome.sample_count = shard_.training.size();
    LocalSources sources;
    try {
        sources = resolve_sources(task);
    } catch (const Error& e) {
        outcome.error = e.what();
        return outcome;
    }

    learner::TrainingConfig local = task.training;
    local.seed = replica_seed(task, config_.station_id);
    const std::uint64_t epoch_base = round * local.epochs;

    learner::LocalTrainResult result = learner::train_local(
        params, *sources.training, sources.validation.get(), local, epoch_base);
    if (result.diverged) {
        outcome.error = "training diverged with non-finite loss";
        return outcome;
    }
    outcome.params = std::move(result.params);
    outcome.train_loss = std::move(result.train_loss);
    outcome.validation = std::move(result.validation);
    outcome.success = true;
    return outcome;
}

} // namespace pht::fhir
