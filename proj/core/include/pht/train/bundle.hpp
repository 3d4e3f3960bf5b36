#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pht/common/sha256.hpp"
#include "pht/train/task_config.hpp"

namespace pht::train {

struct VisitRecord {
    std::uint32_t station_id = 0;
    std::uint64_t epochs_run = 0;
    std::optional<double> final_loss;
    std::uint64_t wall_ms = 0;

    bool operator==(const VisitRecord&) const = default;
};

struct FailureRecord {
    std::uint32_t station_id = 0;
    std::string error;

    bool operator==(const FailureRecord&) const = default;
};

// The Train's manifest: task, route position and visit history.
// provenance records completed visits only; failed visit attempts land in
// `failures` and do not advance the cursor.
struct TrainManifest {
    std::string train_id;
    TaskConfig task;
    std::vector<std::uint32_t> route;
    std::uint64_t cycles = 1;
    std::uint64_t cursor = 0;
    std::uint64_t init_seed = 0;
    std::vector<VisitRecord> provenance;
    std::vector<FailureRecord> failures;
    std::string digest_algorithm = "sha-256";

    std::uint64_t total_visits() const { return route.size() * cycles; }
    std::uint64_t pending_visits() const { return total_visits() - cursor; }
    bool is_complete() const { return cursor >= total_visits(); }
    // Station scheduled for the current cursor position (route repeats
    // across cycles). Throws ConfigError when the route is complete.
    std::uint32_t next_station() const;

    void validate() const;

    nlohmann::json to_json() const;
    static TrainManifest from_json(const nlohmann::json& j);
};

// Immutable manifest + parameter snapshot with an integrity digest.
// Serializes as a container of named entries (manifest.json, params.bin,
// optionally optimizer.bin) followed by a 32-byte SHA-256 trailer over
// everything before it.
class TrainBundle {
public:
    TrainBundle(TrainManifest manifest, learner::ModelParameters params,
                std::optional<learner::AdamState> optimizer_state = std::nullopt);

    const TrainManifest& manifest() const { return manifest_; }
    const learner::ModelParameters& parameters() const { return params_; }
    const std::optional<learner::AdamState>& optimizer_state() const {
        return optimizer_state_;
    }

    std::vector<std::uint8_t> serialize() const;
    static TrainBundle deserialize(std::span<const std::uint8_t> bytes);

    Sha256Digest digest() const;
    std::string digest_hex() const { return to_hex(digest()); }

    // Recomputes the digest and compares with the one captured at
    // construction. Throws IntegrityError on mismatch.
    void verify() const;

private:
    TrainManifest manifest_;
    learner::ModelParameters params_;
    std::optional<learner::AdamState> optimizer_state_;
    Sha256Digest sealed_digest_{};
};

// Fresh Train: parameters initialized from (task.model, init_seed),
// cursor 0, empty provenance.
TrainBundle create_train(const TaskConfig& task, std::vector<std::uint32_t> route,
                         std::uint64_t cycles, std::uint64_t init_seed,
                         std::string train_id);

// Snapshot commit: cursor advances, the visit is appended, the digest is
// recomputed. The input bundle is left untouched. new_params.version must
// be exactly one above the bundle's parameter version.
TrainBundle commit(const TrainBundle& bundle, learner::ModelParameters new_params,
                   VisitRecord visit,
                   std::optional<learner::AdamState> optimizer_state = std::nullopt);

// Failed visit attempt: parameters and cursor unchanged, failure appended.
TrainBundle record_failure(const TrainBundle& bundle, FailureRecord failure);

} // namespace pht::train
