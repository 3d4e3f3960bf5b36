#include "pht/harness/config.hpp"

#include <fstream>
#include <sstream>

#include "pht/common/sha256.hpp"

namespace pht::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void check_known_keys(const json& j, const std::string& path,
                      std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) fail(path + "." + key, "unknown field");
    }
}

std::uint64_t get_u64(const json& j, const std::string& path, const char* key,
                      std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) fail(path + "." + key, "expected an unsigned integer");
    return v.get<std::uint64_t>();
}

double get_double(const json& j, const std::string& path, const char* key,
                  double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

bool get_bool(const json& j, const std::string& path, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::string get_string(const json& j, const std::string& path, const char* key,
                       const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

void locate(const std::string& text, std::size_t byte, std::size_t& line,
            std::size_t& column) {
    line = 1;
    column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
}

} // namespace

std::vector<double> default_class_proportions() {
    // MEL, NV, BCC, AK, BKL, DF, VASC, SCC
    return {0.18, 0.50, 0.13, 0.0225, 0.10, 0.0225, 0.0225, 0.0225};
}

void ExperimentConfig::validate() const {
    if (synthetic.has_value() == directory.has_value()) {
        throw ConfigError("config error at dataset: exactly one of synthetic/directory");
    }
    if (synthetic) {
        if (synthetic->n == 0) throw ConfigError("config error at dataset.synthetic.n: must be positive");
        if (synthetic->image_size == 0) {
            throw ConfigError("config error at dataset.synthetic.image_size: must be positive");
        }
        if (synthetic->proportions.size() != kDiagnosisCodes.size()) {
            throw ConfigError("config error at dataset.synthetic.proportions: need all " +
                              std::to_string(kDiagnosisCodes.size()) + " class codes");
        }
    }
    partition.validate();
    training.validate();
    augment.validate();
    if (plans.empty()) throw ConfigError("config error at plans: at least one plan required");
    for (const auto& p : plans) {
        orch::ExperimentPlan probe;
        probe.policy = p.policy;
        probe.cycles = p.cycles;
        probe.rounds = p.rounds;
        probe.stations.resize(std::max<std::uint32_t>(partition.station_count, 1));
        probe.local_epochs = p.local_epochs.value_or(training.epochs);
        probe.validate();
    }
}

nlohmann::json ExperimentConfig::canonical_json() const {
    json dataset;
    if (synthetic) {
        json props;
        for (std::size_t k = 0; k < kDiagnosisCodes.size(); ++k) {
            props[std::string(kDiagnosisCodes[k])] = synthetic->proportions[k];
        }
        dataset["synthetic"] = {{"n", synthetic->n},
                                {"image_size", synthetic->image_size},
                                {"proportions", props}};
    } else if (directory) {
        dataset["directory"] = {{"path", directory->path.string()},
                                {"labels_csv", directory->labels_csv}};
    }
    json plan_list = json::array();
    for (const auto& p : plans) {
        plan_list.push_back(
            {{"policy", orch::policy_name(p.policy)},
             {"cycles", p.cycles},
             {"rounds", p.rounds},
             {"local_epochs", p.local_epochs.value_or(training.epochs)},
             {"weighting",
              p.weighting == orch::Weighting::Uniform ? "uniform" : "by_sample_count"}});
    }
    return {{"seed", seed},
            {"dataset", dataset},
            {"partition",
             {{"test_fraction", partition.test_fraction},
              {"stations", partition.station_count},
              {"validation_fraction", partition.validation_fraction}}},
            {"model", {{"hidden_width", model_hidden}}},
            {"training",
             {{"epochs", training.epochs},
              {"learning_rate", training.learning_rate},
              {"weight_decay", training.weight_decay},
              {"batch_size", training.batch_size},
              {"beta1", training.beta1},
              {"beta2", training.beta2},
              {"epsilon", training.epsilon},
              {"carry_optimizer_state", training.carry_optimizer_state}}},
            {"augment",
             {{"horizontal_flip_prob", augment.horizontal_flip_prob},
              {"vertical_flip_prob", augment.vertical_flip_prob},
              {"brightness", augment.brightness},
              {"contrast", augment.contrast},
              {"saturation", augment.saturation},
              {"hue", augment.hue},
              {"target_size", augment.target_size}}},
            {"plans", plan_list}};
}

std::string ExperimentConfig::digest() const {
    const auto d = sha256(canonical_json().dump());
    return to_hex(d);
}

ExperimentConfig default_fixture_config(std::uint64_t seed) {
    ExperimentConfig c;
    c.seed = seed;
    SyntheticSpec synth;
    synth.n = 2000;
    synth.image_size = 16;
    synth.proportions = default_class_proportions();
    c.synthetic = synth;
    c.partition.station_count = 3;
    c.training.epochs = 40;
    c.training.learning_rate = 0.0001;
    c.training.weight_decay = 0.0005;
    c.training.batch_size = 16;
    c.augment.horizontal_flip_prob = 0.5;
    c.augment.vertical_flip_prob = 0.5;
    c.augment.brightness = 0.1;
    c.augment.contrast = 0.1;
    c.augment.saturation = 0.1;
    c.augment.hue = 0.05;
    c.augment.target_size = 16;
    PlanConfig centralized;
    centralized.policy = orch::Policy::Centralized;
    PlanConfig iil;
    iil.policy = orch::Policy::IIL;
    PlanConfig fl;
    fl.policy = orch::Policy::FL;
    fl.rounds = 10;
    fl.local_epochs = 4;
    c.plans = {centralized, iil, fl};
    return c;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 0, column = 0;
        locate(text, e.byte > 0 ? e.byte - 1 : 0, line, column);
        throw ConfigError(origin + ": parse error at line " + std::to_string(line) +
                          ", column " + std::to_string(column) + ": " + e.what());
    }

    expect_object(root, "$");
    check_known_keys(root, "$",
                     {"seed", "output", "dataset", "partition", "model", "training",
                      "augment", "plans"});

    ExperimentConfig c;
    c.seed = get_u64(root, "$", "seed", 0);
    c.output = get_string(root, "$", "output", "out");

    if (!root.contains("dataset")) fail("$.dataset", "required field is missing");
    const json& dataset = root.at("dataset");
    expect_object(dataset, "$.dataset");
    check_known_keys(dataset, "$.dataset", {"synthetic", "directory"});
    if (dataset.contains("synthetic")) {
        const json& s = dataset.at("synthetic");
        expect_object(s, "$.dataset.synthetic");
        check_known_keys(s, "$.dataset.synthetic", {"n", "image_size", "proportions"});
        SyntheticSpec synth;
        synth.n = get_u64(s, "$.dataset.synthetic", "n", 2000);
        synth.image_size =
            static_cast<std::uint32_t>(get_u64(s, "$.dataset.synthetic", "image_size", 16));
        synth.proportions = default_class_proportions();
        if (s.contains("proportions")) {
            const json& props = s.at("proportions");
            expect_object(props, "$.dataset.synthetic.proportions");
            synth.proportions.assign(kDiagnosisCodes.size(), 0.0);
            for (const auto& [code, value] : props.items()) {
                if (!is_diagnosis_code(code)) {
                    fail("$.dataset.synthetic.proportions." + code,
                         "unknown diagnosis code");
                }
                if (!value.is_number()) {
                    fail("$.dataset.synthetic.proportions." + code, "expected a number");
                }
                synth.proportions[ClassSet::diagnosis_codes().index_of(code)] =
                    value.get<double>();
            }
        }
        c.synthetic = std::move(synth);
    }
    if (dataset.contains("directory")) {
        const json& d = dataset.at("directory");
        expect_object(d, "$.dataset.directory");
        check_known_keys(d, "$.dataset.directory", {"path", "labels_csv"});
        DirectorySpec dir;
        dir.path = get_string(d, "$.dataset.directory", "path", "");
        if (dir.path.empty()) fail("$.dataset.directory.path", "required field is missing");
        dir.labels_csv = get_string(d, "$.dataset.directory", "labels_csv", "labels.csv");
        c.directory = std::move(dir);
    }

    if (root.contains("partition")) {
        const json& p = root.at("partition");
        expect_object(p, "$.partition");
        check_known_keys(p, "$.partition",
                         {"test_fraction", "stations", "validation_fraction"});
        c.partition.test_fraction = get_double(p, "$.partition", "test_fraction", 0.2);
        c.partition.station_count =
            static_cast<std::uint32_t>(get_u64(p, "$.partition", "stations", 3));
        c.partition.validation_fraction =
            get_double(p, "$.partition", "validation_fraction", 0.2);
    }

    if (root.contains("model")) {
        const json& m = root.at("model");
        expect_object(m, "$.model");
        check_known_keys(m, "$.model", {"hidden_width"});
        c.model_hidden = get_u64(m, "$.model", "hidden_width", 0);
    }

    if (root.contains("training")) {
        const json& t = root.at("training");
        expect_object(t, "$.training");
        check_known_keys(t, "$.training",
                         {"epochs", "learning_rate", "weight_decay", "batch_size",
                          "beta1", "beta2", "epsilon", "carry_optimizer_state"});
        c.training.epochs = get_u64(t, "$.training", "epochs", 40);
        c.training.learning_rate = get_double(t, "$.training", "learning_rate", 0.0001);
        c.training.weight_decay = get_double(t, "$.training", "weight_decay", 0.0005);
        c.training.batch_size = get_u64(t, "$.training", "batch_size", 16);
        c.training.beta1 = get_double(t, "$.training", "beta1", 0.9);
        c.training.beta2 = get_double(t, "$.training", "beta2", 0.999);
        c.training.epsilon = get_double(t, "$.training", "epsilon", 1e-8);
        c.training.carry_optimizer_state =
            get_bool(t, "$.training", "carry_optimizer_state", false);
    }

    if (root.contains("augment")) {
        const json& a = root.at("augment");
        expect_object(a, "$.augment");
        check_known_keys(a, "$.augment",
                         {"horizontal_flip_prob", "vertical_flip_prob", "brightness",
                          "contrast", "saturation", "hue", "target_size"});
        c.augment.horizontal_flip_prob =
            get_double(a, "$.augment", "horizontal_flip_prob", 0.0);
        c.augment.vertical_flip_prob =
            get_double(a, "$.augment", "vertical_flip_prob", 0.0);
        c.augment.brightness = get_double(a, "$.augment", "brightness", 0.0);
        c.augment.contrast = get_double(a, "$.augment", "contrast", 0.0);
        c.augment.saturation = get_double(a, "$.augment", "saturation", 0.0);
        c.augment.hue = get_double(a, "$.augment", "hue", 0.0);
        c.augment.target_size =
            static_cast<std::uint32_t>(get_u64(a, "$.augment", "target_size", 256));
    }

    if (!root.contains("plans")) fail("$.plans", "required field is missing");
    const json& plans = root.at("plans");
    if (!plans.is_array()) fail("$.plans", "expected an array");
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const std::string path = "$.plans[" + std::to_string(i) + "]";
        const json& p = plans.at(i);
        expect_object(p, path);
        check_known_keys(p, path,
                         {"policy", "cycles", "rounds", "local_epochs", "weighting"});
        PlanConfig plan;
        const std::string policy = get_string(p, path, "policy", "");
        if (policy.empty()) fail(path + ".policy", "required field is missing");
        try {
            plan.policy = orch::policy_from_name(policy);
        } catch (const ConfigError&) {
            fail(path + ".policy", "unknown policy '" + policy + "'");
        }
        plan.cycles = get_u64(p, path, "cycles", 1);
        plan.rounds = get_u64(p, path, "rounds", 10);
        if (p.contains("local_epochs")) {
            plan.local_epochs = get_u64(p, path, "local_epochs", 0);
        }
        const std::string weighting = get_string(p, path, "weighting", "by_sample_count");
        if (weighting == "uniform") {
            plan.weighting = orch::Weighting::Uniform;
        } else if (weighting == "by_sample_count") {
            plan.weighting = orch::Weighting::BySampleCount;
        } else {
            fail(path + ".weighting", "expected 'uniform' or 'by_sample_count'");
        }
        c.plans.push_back(plan);
    }

    c.partition.seed = 0; // filled from the master seed at run time
    c.validate();
    return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

} // namespace pht::harness
