#include "pht/train/bundle.hpp"

#include <algorithm>

#include "pht/common/binio.hpp"
#include "pht/common/errors.hpp"
#include "pht/common/labels.hpp"

namespace pht::train {

namespace {

constexpr char kMagic[4] = {'P', 'H', 'T', 'B'};
constexpr std::uint8_t kFormatVersion = 1;

nlohmann::json training_to_json(const learner::TrainingConfig& t) {
    return {{"epochs", t.epochs},
            {"learning_rate", t.learning_rate},
            {"weight_decay", t.weight_decay},
            {"batch_size", t.batch_size},
            {"seed", t.seed},
            {"beta1", t.beta1},
            {"beta2", t.beta2},
            {"epsilon", t.epsilon},
            {"carry_optimizer_state", t.carry_optimizer_state}};
}

learner::TrainingConfig training_from_json(const nlohmann::json& j) {
    learner::TrainingConfig t;
    t.epochs = j.at("epochs").get<std::uint64_t>();
    t.learning_rate = j.at("learning_rate").get<double>();
    t.weight_decay = j.at("weight_decay").get<double>();
    t.batch_size = j.at("batch_size").get<std::uint64_t>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.beta1 = j.at("beta1").get<double>();
    t.beta2 = j.at("beta2").get<double>();
    t.epsilon = j.at("epsilon").get<double>();
    t.carry_optimizer_state = j.at("carry_optimizer_state").get<bool>();
    return t;
}

nlohmann::json augment_to_json(const preprocess::AugmentConfig& a) {
    return {{"horizontal_flip_prob", a.horizontal_flip_prob},
            {"vertical_flip_prob", a.vertical_flip_prob},
            {"brightness", a.brightness},
            {"contrast", a.contrast},
            {"saturation", a.saturation},
            {"hue", a.hue},
            {"target_size", a.target_size}};
}

preprocess::AugmentConfig augment_from_json(const nlohmann::json& j) {
    preprocess::AugmentConfig a;
    a.horizontal_flip_prob = j.at("horizontal_flip_prob").get<double>();
    a.vertical_flip_prob = j.at("vertical_flip_prob").get<double>();
    a.brightness = j.at("brightness").get<double>();
    a.contrast = j.at("contrast").get<double>();
    a.saturation = j.at("saturation").get<double>();
    a.hue = j.at("hue").get<double>();
    a.target_size = j.at("target_size").get<std::uint32_t>();
    return a;
}

} // namespace

void TaskConfig::validate() const {
    training.validate();
    augment.validate();
    if (model.input_dim == 0 || model.num_classes < 2) {
        throw ConfigError("task model needs input_dim >= 1 and num_classes >= 2");
    }
    if (classes.size() != model.num_classes) {
        throw ConfigError("class code list does not match model class count");
    }
}

nlohmann::json to_json(const TaskConfig& task) {
    return {{"training", training_to_json(task.training)},
            {"augment", augment_to_json(task.augment)},
            {"model",
             {{"input_dim", task.model.input_dim},
              {"num_classes", task.model.num_classes},
              {"hidden_width", task.model.hidden_width}}},
            {"classes", task.classes}};
}

TaskConfig task_config_from_json(const nlohmann::json& j) {
    TaskConfig task;
    task.training = training_from_json(j.at("training"));
    task.augment = augment_from_json(j.at("augment"));
    const auto& m = j.at("model");
    task.model.input_dim = m.at("input_dim").get<std::uint64_t>();
    task.model.num_classes = m.at("num_classes").get<std::uint64_t>();
    task.model.hidden_width = m.at("hidden_width").get<std::uint64_t>();
    task.classes = j.at("classes").get<std::vector<std::string>>();
    return task;
}

std::uint32_t TrainManifest::next_station() const {
    if (is_complete()) throw ConfigError("train route is complete");
    return route[cursor % route.size()];
}

void TrainManifest::validate() const {
    if (train_id.empty()) throw ConfigError("train_id must be non-empty");
    if (route.empty()) throw ConfigError("train route must be non-empty");
    if (cycles == 0) throw ConfigError("cycles must be at least 1");
    if (cursor > total_visits()) throw ConfigError("cursor past end of route");
    if (provenance.size() != cursor) {
        throw ConfigError("provenance length does not match completed visits");
    }
    task.validate();
}

nlohmann::json TrainManifest::to_json() const {
    nlohmann::json prov = nlohmann::json::array();
    for (const auto& v : provenance) {
        nlohmann::json entry = {{"station_id", v.station_id},
                                {"epochs_run", v.epochs_run},
                                {"wall_ms", v.wall_ms}};
        if (v.final_loss) {
            entry["final_loss"] = *v.final_loss;
        } else {
            entry["final_loss"] = nullptr;
        }
        prov.push_back(std::move(entry));
    }
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& f : failures) {
        fails.push_back({{"station_id", f.station_id}, {"error", f.error}});
    }
    return {{"train_id", train_id},
            {"task", train::to_json(task)},
            {"route", route},
            {"cycles", cycles},
            {"cursor", cursor},
            {"init_seed", init_seed},
            {"provenance", prov},
            {"failures", fails},
            {"digest_algorithm", digest_algorithm}};
}

TrainManifest TrainManifest::from_json(const nlohmann::json& j) {
    TrainManifest m;
    m.train_id = j.at("train_id").get<std::string>();
    m.task = task_config_from_json(j.at("task"));
    m.route = j.at("route").get<std::vector<std::uint32_t>>();
    m.cycles = j.at("cycles").get<std::uint64_t>();
    m.cursor = j.at("cursor").get<std::uint64_t>();
    m.init_seed = j.at("init_seed").get<std::uint64_t>();
    for (const auto& v : j.at("provenance")) {
        VisitRecord record;
        record.station_id = v.at("station_id").get<std::uint32_t>();
        record.epochs_run = v.at("epochs_run").get<std::uint64_t>();
        record.wall_ms = v.at("wall_ms").get<std::uint64_t>();
        if (!v.at("final_loss").is_null()) {
            record.final_loss = v.at("final_loss").get<double>();
        }
        m.provenance.push_back(std::move(record));
    }
    for (const auto& f : j.at("failures")) {
        m.failures.push_back({f.at("station_id").get<std::uint32_t>(),
                              f.at("error").get<std::string>()});
    }
    m.digest_algorithm = j.at("digest_algorithm").get<std::string>();
    return m;
}

namespace {

std::vector<std::uint8_t> container_body(const TrainManifest& manifest,
                                         const learner::ModelParameters& params,
                                         const std::optional<learner::AdamState>& opt) {
    ByteWriter w;
    w.raw(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(kMagic), sizeof(kMagic)));
    w.u8(kFormatVersion);
    w.varint(opt ? 3 : 2);

    const std::string manifest_json = manifest.to_json().dump();
    w.str("manifest.json");
    w.varint(manifest_json.size());
    w.raw(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(manifest_json.data()), manifest_json.size()));

    const auto params_bin = params.serialize();
    w.str("params.bin");
    w.varint(params_bin.size());
    w.raw(params_bin);

    if (opt) {
        const auto opt_bin = opt->serialize();
        w.str("optimizer.bin");
        w.varint(opt_bin.size());
        w.raw(opt_bin);
    }
    return w.take();
}

} // namespace

TrainBundle::TrainBundle(TrainManifest manifest, learner::ModelParameters params,
                         std::optional<learner::AdamState> optimizer_state)
    : manifest_(std::move(manifest)),
      params_(std::move(params)),
      optimizer_state_(std::move(optimizer_state)) {
    manifest_.validate();
    params_.validate();
    if (params_.version != manifest_.provenance.size() + 1) {
        throw ConfigError("parameter version must equal provenance length + 1");
    }
    if (optimizer_state_ && optimizer_state_->m.size() != params_.size()) {
        throw ConfigError("optimizer state does not match parameter count");
    }
    sealed_digest_ = sha256(container_body(manifest_, params_, optimizer_state_));
}

Sha256Digest TrainBundle::digest() const { return sealed_digest_; }

void TrainBundle::verify() const {
    const auto current = sha256(container_body(manifest_, params_, optimizer_state_));
    if (current != sealed_digest_) {
        throw IntegrityError("bundle digest mismatch: content was tampered");
    }
}

std::vector<std::uint8_t> TrainBundle::serialize() const {
    std::vector<std::uint8_t> out = container_body(manifest_, params_, optimizer_state_);
    const auto d = sha256(out);
    out.insert(out.end(), d.begin(), d.end());
    return out;
}

TrainBundle TrainBundle::deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < sizeof(kMagic) + 1 + 32) {
        throw DataError("bundle container too short");
    }
    const std::span<const std::uint8_t> body = bytes.first(bytes.size() - 32);
    const std::span<const std::uint8_t> trailer = bytes.last(32);
    const auto computed = sha256(body);
    if (!std::equal(trailer.begin(), trailer.end(), computed.begin())) {
        throw IntegrityError("bundle digest mismatch: container was tampered");
    }

    ByteReader r(body);
    const auto magic = r.raw(sizeof(kMagic));
    if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) {
        throw DataError("not a train bundle container");
    }
    if (r.u8() != kFormatVersion) throw DataError("unsupported bundle format version");

    const std::uint64_t entry_count = r.varint();
    std::optional<TrainManifest> manifest;
    std::optional<learner::ModelParameters> params;
    std::optional<learner::AdamState> opt_state;
    for (std::uint64_t i = 0; i < entry_count; ++i) {
        const std::string name = r.str();
        const std::uint64_t len = r.varint();
        const auto payload = r.raw(len);
        if (name == "manifest.json") {
            manifest = TrainManifest::from_json(
                nlohmann::json::parse(payload.begin(), payload.end()));
        } else if (name == "params.bin") {
            params = learner::ModelParameters::deserialize(payload);
        } else if (name == "optimizer.bin") {
            opt_state = learner::AdamState::deserialize(payload);
        } else {
            throw DataError("unknown bundle entry: " + name);
        }
    }
    if (!manifest || !params) throw DataError("bundle container is missing entries");
    return TrainBundle(std::move(*manifest), std::move(*params), std::move(opt_state));
}

TrainBundle create_train(const TaskConfig& task, std::vector<std::uint32_t> route,
                         std::uint64_t cycles, std::uint64_t init_seed,
                         std::string train_id) {
    if (route.empty()) throw ConfigError("train route must be non-empty");
    if (cycles == 0) throw ConfigError("cycles must be at least 1");
    task.validate();
    TrainManifest manifest;
    manifest.train_id = std::move(train_id);
    manifest.task = task;
    manifest.route = std::move(route);
    manifest.cycles = cycles;
    manifest.cursor = 0;
    manifest.init_seed = init_seed;
    learner::ModelParameters params = learner::init_parameters(task.model, init_seed);
    return TrainBundle(std::move(manifest), std::move(params));
}

TrainBundle commit(const TrainBundle& bundle, learner::ModelParameters new_params,
                   VisitRecord visit, std::optional<learner::AdamState> optimizer_state) {
    bundle.verify();
    if (bundle.manifest().is_complete()) {
        throw ConfigError("cannot commit: train route is complete");
    }
    if (new_params.version != bundle.parameters().version + 1) {
        throw ConfigError("committed parameters must carry the next version");
    }
    TrainManifest manifest = bundle.manifest();
    manifest.cursor += 1;
    manifest.provenance.push_back(std::move(visit));
    if (!manifest.task.training.carry_optimizer_state) optimizer_state.reset();
    return TrainBundle(std::move(manifest), std::move(new_params),
                       std::move(optimizer_state));
}

TrainBundle record_failure(const TrainBundle& bundle, FailureRecord failure) {
    bundle.verify();
    TrainManifest manifest = bundle.manifest();
    manifest.failures.push_back(std::move(failure));
    return TrainBundle(manifest, bundle.parameters(), bundle.optimizer_state());
}

} // namespace pht::train
