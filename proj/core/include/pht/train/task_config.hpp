#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pht/learner/adam.hpp"
#include "pht/learner/model.hpp"
#include "pht/preprocess/image.hpp"

namespace pht::train {

// Everything a station needs to run the analytic task: training
// hyperparameters, the augmentation policy, the model architecture and
// the class code order.
struct TaskConfig {
    learner::TrainingConfig training;
    preprocess::AugmentConfig augment;
    learner::ModelShape model;
    std::vector<std::string> classes;

    void validate() const;
};

nlohmann::json to_json(const TaskConfig& task);
TaskConfig task_config_from_json(const nlohmann::json& j);

} // namespace pht::train
