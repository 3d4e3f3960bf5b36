#include "pht/harness/experiment.hpp"

#include <fstream>
#include <set>

#include "pht/common/rng.hpp"
#include "pht/preprocess/feature_source.hpp"

namespace pht::harness {

namespace {

constexpr std::uint64_t kPartitionSeedTag = 0x70736564; // "psed"
constexpr std::uint64_t kTrainSeedTag = 0x74736564;     // "tsed"
constexpr std::uint64_t kPooledAugTag = 0x706f6f6c;     // "pool"

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

} // namespace

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
    config_.validate();
    dataset_ = load_dataset(config_, config_.seed);
    experiment_name_ = "exp-" + config_.digest().substr(0, 12);

    partition::PartitionSpec spec = config_.partition;
    spec.seed = mix_seed({config_.seed, kPartitionSeedTag});
    partition_ = partition::split(dataset_.labeled_ids(), spec);

    for (const auto& shard : partition_.shards) {
        auto station = std::make_unique<fhir::Station>(
            fhir::StationConfig::local(shard.station_id), shard);
        std::vector<fhir::IngestSample> samples;
        auto add = [&](const std::vector<std::string>& ids) {
            for (const auto& id : ids) {
                const DatasetSample& s = dataset_.by_id(id);
                samples.push_back({s.id, s.png, s.label, s.age, s.sex, s.anatomical_site});
            }
        };
        add(shard.training);
        add(shard.validation);
        station->ingest_samples(experiment_name_, samples);
        stations_.push_back(std::move(station));
    }

    test_source_ = source_for_ids(partition_.test, false, 0);

    std::vector<std::string> pooled_train_ids, pooled_val_ids;
    for (const auto& shard : partition_.shards) {
        pooled_train_ids.insert(pooled_train_ids.end(), shard.training.begin(),
                                shard.training.end());
        pooled_val_ids.insert(pooled_val_ids.end(), shard.validation.begin(),
                              shard.validation.end());
    }
    const std::uint64_t training_seed = mix_seed({config_.seed, kTrainSeedTag});
    pooled_training_ = source_for_ids(pooled_train_ids, true,
                                      mix_seed({training_seed, kPooledAugTag}));
    pooled_validation_ = source_for_ids(pooled_val_ids, false, 0);
}

std::unique_ptr<learner::TrainingSource> Experiment::source_for_ids(
    const std::vector<std::string>& ids, bool augmented,
    std::uint64_t augment_seed) const {
    std::vector<std::pair<preprocess::RawImage, int>> pairs;
    pairs.reserve(ids.size());
    for (const auto& id : ids) {
        const DatasetSample& s = dataset_.by_id(id);
        pairs.emplace_back(preprocess::preprocess(s.image, config_.augment.target_size),
                           static_cast<int>(dataset_.classes.index_of(s.label)));
    }
    return std::make_unique<preprocess::ImageSource>(std::move(pairs), config_.augment,
                                                     augment_seed, augmented);
}

std::vector<fhir::Station*> Experiment::stations() {
    std::vector<fhir::Station*> out;
    out.reserve(stations_.size());
    for (auto& s : stations_) out.push_back(s.get());
    return out;
}

train::TaskConfig Experiment::task_config(const PlanConfig& plan) const {
    train::TaskConfig task;
    task.training = config_.training;
    task.training.seed = mix_seed({config_.seed, kTrainSeedTag});
    task.training.epochs = plan.local_epochs.value_or(config_.training.epochs);
    task.augment = config_.augment;
    const std::uint64_t side = config_.augment.target_size;
    task.model.input_dim = side * side * preprocess::RawImage::kChannels;
    task.model.num_classes = dataset_.classes.size();
    task.model.hidden_width = config_.model_hidden;
    task.classes = dataset_.classes.codes();
    return task;
}

orch::ExperimentPlan Experiment::orchestration_plan(const PlanConfig& plan) const {
    orch::ExperimentPlan p;
    p.policy = plan.policy;
    for (const auto& shard : partition_.shards) p.stations.push_back(shard.station_id);
    p.cycles = plan.cycles;
    p.rounds = plan.rounds;
    p.local_epochs = plan.local_epochs.value_or(config_.training.epochs);
    p.weighting = plan.weighting;
    p.seed = config_.seed;
    return p;
}

orch::RunRecord Experiment::run_plan(const PlanConfig& plan, const std::string& run_id,
                                     orch::WireLog* wire_log) {
    const train::TaskConfig task = task_config(plan);
    const orch::ExperimentPlan p = orchestration_plan(plan);
    const auto station_ptrs = stations();
    switch (plan.policy) {
        case orch::Policy::IIL:
        case orch::Policy::CyclicIIL:
            return orch::run_iil(p, task, station_ptrs, registry_, wire_log,
                                 test_source_.get(), run_id);
        case orch::Policy::FL:
            return orch::run_fl(p, task, station_ptrs, wire_log, test_source_.get(),
                                run_id);
        case orch::Policy::Centralized:
            return orch::run_centralized(p, task, *pooled_training_,
                                         pooled_validation_.get(), test_source_.get(),
                                         run_id);
    }
    throw ConfigError("unknown policy in plan");
}

std::vector<std::vector<std::uint8_t>> Experiment::ingested_blobs() const {
    std::vector<std::vector<std::uint8_t>> blobs;
    for (const auto& station : stations_) {
        for (const auto& key : station->objects().keys()) {
            blobs.push_back(station->objects().get(key));
        }
    }
    return blobs;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& output_dir) {
    Experiment experiment(config);
    const std::string digest = config.digest();

    std::filesystem::create_directories(output_dir);
    ExperimentOutcome outcome;
    outcome.config_digest = digest;
    outcome.partition = experiment.partition();

    nlohmann::json manifest = partition::to_json(experiment.partition());
    manifest["config_digest"] = digest;
    outcome.partition_manifest = output_dir / "partition.json";
    write_text_file(outcome.partition_manifest, manifest.dump(2) + "\n");

    std::set<std::string> used_names;
    for (const auto& plan : config.plans) {
        std::string name = orch::policy_name(plan.policy);
        for (int i = 2; used_names.count(name); ++i) {
            name = orch::policy_name(plan.policy) + "-" + std::to_string(i);
        }
        used_names.insert(name);
        const std::string run_id = name + "-" + digest.substr(0, 12);

        const bool distributed = plan.policy != orch::Policy::Centralized;
        orch::WireLog wire_log;
        PolicyRun run;
        run.name = name;
        run.record = experiment.run_plan(plan, run_id,
                                         distributed ? &wire_log : nullptr);
        if (!run.record.completed) outcome.all_completed = false;

        const auto rows = metrics::loss_trace_report(run.record);
        std::ostringstream csv;
        metrics::write_trace_csv(csv, rows, digest);
        run.trace_csv = output_dir / (name + "_trace.csv");
        write_text_file(run.trace_csv, csv.str());

        run.summary = metrics::summary_json(run.record, digest,
                                            experiment.dataset().classes.size());
        run.summary_json = output_dir / (name + "_summary.json");
        write_text_file(run.summary_json, run.summary.dump(2) + "\n");

        std::ostringstream events;
        for (const auto& e : run.record.events) {
            events << e.seq << ' ' << e.kind << " epoch=" << e.global_epoch
                   << " station=" << e.station_id << " wall_ms=" << e.wall_ms << '\n';
        }
        write_text_file(output_dir / (name + "_events.log"), events.str());
        if (distributed) {
            wire_log.write_file(output_dir / (name + "_wire.bin"));
        }

        outcome.runs.push_back(std::move(run));
    }
    return outcome;
}

} // namespace pht::harness
