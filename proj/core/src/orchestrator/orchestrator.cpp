#include "pht/orchestrator/orchestrator.hpp"

#include <chrono>
#include <future>
#include <map>

#include "pht/common/binio.hpp"
#include "pht/common/rng.hpp"

namespace pht::orch {

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974;

std::string train_id_for(const std::string& run_id) { return "train-" + run_id; }

class EventClock {
public:
    RunEvent make(const std::string& kind, std::uint64_t global_epoch, int station_id) {
        RunEvent e;
        e.seq = ++seq_;
        e.kind = kind;
        e.global_epoch = global_epoch;
        e.station_id = station_id;
        e.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start_)
                        .count();
        return e;
    }

private:
    std::uint64_t seq_ = 0;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::map<std::uint32_t, fhir::Station*> index_stations(
    std::span<fhir::Station* const> stations) {
    std::map<std::uint32_t, fhir::Station*> by_id;
    for (fhir::Station* s : stations) {
        if (!by_id.emplace(s->station_id(), s).second) {
            throw ConfigError("duplicate station id " + std::to_string(s->station_id()));
        }
    }
    return by_id;
}

class MessageSender {
public:
    MessageSender(WireLog* log, std::string run_id)
        : log_(log), run_id_(std::move(run_id)) {}

    void pull_train(const std::string& train_id) {
        ByteWriter w;
        w.str(train_id);
        send(MessageType::PullTrain, w.bytes());
    }
    void execute_train(const train::TrainBundle& bundle) {
        send(MessageType::ExecuteTrain, bundle.serialize());
    }
    void train_result(const fhir::ExecutionOutcome& outcome) {
        ByteWriter w;
        w.u8(outcome.success ? 1 : 0);
        w.str(outcome.error);
        const auto bundle = outcome.bundle.serialize();
        w.varint(bundle.size());
        w.raw(bundle);
        send(MessageType::TrainResult, w.bytes());
    }
    void broadcast(std::uint64_t round, const learner::ModelParameters& params) {
        ByteWriter w;
        w.varint(round);
        const auto bin = params.serialize();
        w.varint(bin.size());
        w.raw(bin);
        send(MessageType::Broadcast, w.bytes());
    }
    void replica_result(std::uint64_t round, const fhir::ReplicaOutcome& outcome) {
        ByteWriter w;
        w.varint(round);
        w.varint(outcome.sample_count);
        w.u8(outcome.success ? 1 : 0);
        if (outcome.success) {
            const auto bin = outcome.params.serialize();
            w.varint(bin.size());
            w.raw(bin);
        } else {
            w.str(outcome.error);
        }
        send(MessageType::ReplicaResult, w.bytes());
    }

private:
    void send(MessageType type, std::span<const std::uint8_t> payload) {
        if (log_) log_->append(type, run_id_, ++seq_, payload);
    }

    WireLog* log_;
    std::string run_id_;
    std::uint64_t seq_ = 0;
};

} // namespace

std::string policy_name(Policy policy) {
    switch (policy) {
        case Policy::IIL: return "iil";
        case Policy::CyclicIIL: return "cyclic-iil";
        case Policy::FL: return "fl";
        case Policy::Centralized: return "centralized";
    }
    return "unknown";
}

Policy policy_from_name(const std::string& name) {
    if (name == "iil") return Policy::IIL;
    if (name == "cyclic-iil") return Policy::CyclicIIL;
    if (name == "fl") return Policy::FL;
    if (name == "centralized") return Policy::Centralized;
    throw ConfigError("unknown policy: " + name);
}

void ExperimentPlan::validate() const {
    switch (policy) {
        case Policy::IIL:
            if (cycles != 1) throw ConfigError("IIL is a single pass; use cyclic-iil for cycles > 1");
            [[fallthrough]];
        case Policy::CyclicIIL:
            if (stations.empty()) throw ConfigError("IIL requires a route");
            if (cycles == 0) throw ConfigError("cycles must be at least 1");
            break;
        case Policy::FL:
            if (stations.empty()) throw ConfigError("FL requires stations");
            if (rounds == 0) throw ConfigError("FL requires rounds >= 1");
            break;
        case Policy::Centralized:
            break;
    }
}

learner::ModelParameters aggregate(std::span<const learner::ModelParameters> replicas,
                                   std::span<const double> weights) {
    if (replicas.empty()) throw ConfigError("aggregate needs at least one replica");
    if (weights.size() != replicas.size()) {
        throw ConfigError("aggregate weight count does not match replica count");
    }
    const std::size_t n = replicas.front().size();
    std::uint64_t version = replicas.front().version;
    for (const auto& r : replicas) {
        if (r.size() != n || r.shapes != replicas.front().shapes) {
            throw ConfigError("aggregate replicas differ in shape");
        }
        version = std::max(version, r.version);
    }
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ConfigError("aggregate weights must be non-negative");
        total += w;
    }
    if (total <= 0.0) throw ConfigError("aggregate weights must not all be zero");

    learner::ModelParameters out = replicas.front();
    out.version = version;
    bool identical = true;
    for (std::size_t i = 1; identical && i < replicas.size(); ++i) {
        identical = replicas[i].values == out.values;
    }
    if (identical) return out;

    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < replicas.size(); ++i) {
            acc += weights[i] * replicas[i].values[j];
        }
        out.values[j] = acc / total;
    }
    return out;
}

TestEval evaluate_test(const learner::ModelParameters& params,
                       const learner::TrainingSource& test_source) {
    TestEval eval;
    const learner::EpochEval e = learner::evaluate(params, test_source);
    eval.loss = e.loss;
    eval.mean_accuracy = e.mean_accuracy;
    eval.mean_recall = e.mean_recall;
    eval.mean_accuracy_literal =
        metrics::mean_accuracy_literal(learner::evaluate_confusion(params, test_source));
    return eval;
}

RunRecord run_iil(const ExperimentPlan& plan, const train::TaskConfig& task,
                  std::span<fhir::Station* const> stations,
                  train::TrainRegistry& registry, WireLog* wire_log,
                  const learner::TrainingSource* test_source,
                  const std::string& run_id) {
    plan.validate();
    if (plan.policy != Policy::IIL && plan.policy != Policy::CyclicIIL) {
        throw ConfigError("run_iil requires an IIL policy");
    }
    const auto by_id = index_stations(stations);
    for (std::uint32_t id : plan.stations) {
        if (!by_id.count(id)) throw ConfigError("route names unknown station " + std::to_string(id));
    }

    train::TaskConfig effective = task;
    effective.training.epochs = plan.local_epochs;

    RunRecord record;
    record.policy = policy_name(plan.policy);
    record.run_id = run_id;
    record.seed = plan.seed;

    EventClock clock;
    MessageSender sender(wire_log, run_id);
    record.events.push_back(clock.make("run_start", 0, -1));

    const std::string train_id = train_id_for(run_id);
    registry.push(train::create_train(effective, plan.stations, plan.cycles,
                                      mix_seed({plan.seed, kInitTag}), train_id));

    const std::uint64_t total_visits = plan.stations.size() * plan.cycles;
    const std::uint64_t epochs_per_visit = plan.local_epochs;
    for (std::uint64_t visit = 0; visit < total_visits; ++visit) {
        sender.pull_train(train_id);
        const train::TrainBundle bundle = registry.pull(train_id);
        const std::uint32_t station_id = bundle.manifest().next_station();
        fhir::Station* station = by_id.at(station_id);

        record.events.push_back(clock.make("visit_start", visit * epochs_per_visit,
                                           static_cast<int>(station_id)));
        sender.execute_train(bundle);
        const fhir::ExecutionOutcome outcome = station->execute_train(bundle);
        sender.train_result(outcome);

        if (!outcome.success) {
            record.failure = "station " + std::to_string(station_id) + ": " + outcome.error;
            record.events.push_back(clock.make("failure", visit * epochs_per_visit,
                                               static_cast<int>(station_id)));
            return record;
        }
        registry.push(outcome.bundle);

        for (std::size_t e = 0; e < outcome.train_loss.size(); ++e) {
            EpochRow row;
            row.global_epoch = visit * epochs_per_visit + e + 1;
            row.station_id = static_cast<int>(station_id);
            row.train_loss = outcome.train_loss[e];
            if (e < outcome.validation.size()) row.validation = outcome.validation[e];
            record.epochs.push_back(row);
        }
        if (visit + 1 < total_visits) {
            record.events.push_back(clock.make("hop", (visit + 1) * epochs_per_visit,
                                               static_cast<int>(station_id)));
        }
    }

    record.completed = true;
    record.final_params = registry.pull(train_id).parameters();
    if (test_source) record.final_test = evaluate_test(*record.final_params, *test_source);
    record.events.push_back(clock.make("run_end", total_visits * epochs_per_visit, -1));
    return record;
}

RunRecord run_fl(const ExperimentPlan& plan, const train::TaskConfig& task,
                 std::span<fhir::Station* const> stations, WireLog* wire_log,
                 const learner::TrainingSource* test_source,
                 const std::string& run_id) {
    plan.validate();
    if (plan.policy != Policy::FL) throw ConfigError("run_fl requires the FL policy");
    const auto by_id = index_stations(stations);
    std::vector<fhir::Station*> members;
    for (std::uint32_t id : plan.stations) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw ConfigError("plan names unknown station " + std::to_string(id));
        members.push_back(it->second);
    }

    train::TaskConfig effective = task;
    effective.training.epochs = plan.local_epochs;

    RunRecord record;
    record.policy = policy_name(plan.policy);
    record.run_id = run_id;
    record.seed = plan.seed;

    EventClock clock;
    MessageSender sender(wire_log, run_id);
    record.events.push_back(clock.make("run_start", 0, -1));

    learner::ModelParameters params =
        learner::init_parameters(effective.model, mix_seed({plan.seed, kInitTag}));

    for (std::uint64_t round = 0; round < plan.rounds; ++round) {
        for (fhir::Station* member : members) {
            (void)member;
            sender.broadcast(round, params);
        }

        // Replicas run concurrently; results are collected and logged in
        // station order so runs stay deterministic.
        std::vector<std::future<fhir::ReplicaOutcome>> futures;
        futures.reserve(members.size());
        for (fhir::Station* member : members) {
            futures.push_back(std::async(std::launch::async, [member, &params,
                                                              &effective, round] {
                return member->run_replica(params, effective, round);
            }));
        }
        std::vector<fhir::ReplicaOutcome> outcomes;
        outcomes.reserve(members.size());
        for (auto& f : futures) outcomes.push_back(f.get());

        for (const auto& outcome : outcomes) sender.replica_result(round, outcome);
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (!outcomes[i].success) {
                record.failure = "station " + std::to_string(members[i]->station_id()) +
                                 ": " + outcomes[i].error;
                record.events.push_back(clock.make("failure", round + 1,
                                                   static_cast<int>(members[i]->station_id())));
                return record;
            }
        }

        std::vector<learner::ModelParameters> replicas;
        std::vector<double> weights;
        replicas.reserve(outcomes.size());
        for (const auto& outcome : outcomes) {
            replicas.push_back(outcome.params);
            weights.push_back(plan.weighting == Weighting::BySampleCount
                                  ? static_cast<double>(outcome.sample_count)
                                  : 1.0);
        }
        params = aggregate(replicas, weights);

        double weight_total = 0.0;
        EpochRow row;
        row.global_epoch = round + 1;
        row.station_id = -1;
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (outcomes[i].train_loss.empty()) continue;
            const double w = weights[i];
            row.train_loss += w * outcomes[i].train_loss.back();
            row.validation.loss += w * outcomes[i].validation.back().loss;
            row.validation.mean_accuracy += w * outcomes[i].validation.back().mean_accuracy;
            row.validation.mean_recall += w * outcomes[i].validation.back().mean_recall;
            weight_total += w;
        }
        if (weight_total > 0.0) {
            row.train_loss /= weight_total;
            row.validation.loss /= weight_total;
            row.validation.mean_accuracy /= weight_total;
            row.validation.mean_recall /= weight_total;
        }
        record.epochs.push_back(row);
        record.events.push_back(clock.make("round", round + 1, -1));
    }

    record.completed = true;
    record.final_params = params;
    if (test_source) record.final_test = evaluate_test(params, *test_source);
    record.events.push_back(clock.make("run_end", plan.rounds, -1));
    return record;
}

RunRecord run_centralized(const ExperimentPlan& plan, const train::TaskConfig& task,
                          const learner::TrainingSource& pooled_training,
                          const learner::TrainingSource* pooled_validation,
                          const learner::TrainingSource* test_source,
                          const std::string& run_id) {
    plan.validate();
    if (plan.policy != Policy::Centralized) {
        throw ConfigError("run_centralized requires the centralized policy");
    }
    if (pooled_training.size() == 0) throw ConfigError("empty pooled training set");

    train::TaskConfig effective = task;
    effective.training.epochs = plan.local_epochs;

    RunRecord record;
    record.policy = policy_name(plan.policy);
    record.run_id = run_id;
    record.seed = plan.seed;

    EventClock clock;
    record.events.push_back(clock.make("run_start", 0, -1));

    learner::ModelParameters params =
        learner::init_parameters(effective.model, mix_seed({plan.seed, kInitTag}));
    learner::LocalTrainResult result = learner::train_local(
        params, pooled_training, pooled_validation, effective.training);

    if (result.diverged) {
        record.failure = "training diverged with non-finite loss";
        record.events.push_back(clock.make("failure", result.train_loss.size(), -1));
    } else {
        record.completed = true;
    }
    for (std::size_t e = 0; e < result.train_loss.size(); ++e) {
        EpochRow row;
        row.global_epoch = e + 1;
        row.station_id = -1;
        row.train_loss = result.train_loss[e];
        if (e < result.validation.size()) row.validation = result.validation[e];
        record.epochs.push_back(row);
    }
    if (record.completed) {
        record.final_params = result.params;
        if (test_source) record.final_test = evaluate_test(result.params, *test_source);
    }
    record.events.push_back(clock.make("run_end", result.train_loss.size(), -1));
    return record;
}

} // namespace pht::orch
