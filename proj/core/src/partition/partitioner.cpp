#include "pht/partition/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pht/common/errors.hpp"
#include "pht/common/rng.hpp"

namespace pht::partition {

namespace {

constexpr std::uint64_t kPartitionTag = 0x70617274; // "part"

// floor with a guard against values like 6.0 computed as 5.999...9.
std::uint64_t floor_count(double x) {
    return static_cast<std::uint64_t>(std::floor(x + 1e-9));
}

// Largest-remainder apportionment of `total` across weights, each entry
// capped. Ties break on the lower index.
std::vector<std::uint64_t> apportion(std::uint64_t total,
                                     const std::vector<std::uint64_t>& weights,
                                     const std::vector<std::uint64_t>& caps) {
    std::uint64_t weight_sum = 0;
    for (auto w : weights) weight_sum += w;
    std::vector<std::uint64_t> counts(weights.size(), 0);
    if (weight_sum == 0 || total == 0) return counts;

    std::vector<std::pair<double, std::size_t>> remainders;
    std::uint64_t assigned = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double quota = static_cast<double>(total) *
                             static_cast<double>(weights[k]) /
                             static_cast<double>(weight_sum);
        counts[k] = std::min<std::uint64_t>(floor_count(quota), caps[k]);
        assigned += counts[k];
        remainders.emplace_back(quota - std::floor(quota + 1e-9), k);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::size_t cursor = 0;
    while (assigned < total && cursor < remainders.size()) {
        const std::size_t k = remainders[cursor++].second;
        if (counts[k] < caps[k]) {
            ++counts[k];
            ++assigned;
        }
        if (cursor == remainders.size() && assigned < total) cursor = 0;
    }
    return counts;
}

struct ClassGroup {
    std::string label;
    std::vector<std::string> ids; // canonically sorted, then shuffled
};

std::vector<ClassGroup> group_by_class(const LabeledIds& labels) {
    std::map<std::string, std::vector<std::string>> by_label;
    std::set<std::string> seen;
    for (const auto& [id, label] : labels) {
        if (!seen.insert(id).second) throw ConfigError("duplicate sample id: " + id);
        by_label[label].push_back(id);
    }
    std::vector<ClassGroup> groups;
    groups.reserve(by_label.size());
    for (auto& [label, ids] : by_label) {
        std::sort(ids.begin(), ids.end());
        groups.push_back({label, std::move(ids)});
    }
    return groups;
}

} // namespace

void PartitionSpec::validate() const {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("test_fraction must be in (0, 1)");
    }
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
        throw ConfigError("validation_fraction must be in (0, 1)");
    }
    if (station_count == 0) throw ConfigError("station_count must be positive");
}

Partition split(const LabeledIds& labels, const PartitionSpec& spec) {
    spec.validate();
    if (labels.empty()) throw ConfigError("cannot partition an empty dataset");

    std::vector<ClassGroup> groups = group_by_class(labels);
    for (const auto& g : groups) {
        if (g.ids.size() < spec.station_count) {
            throw ConfigError("class " + g.label + " has only " +
                              std::to_string(g.ids.size()) + " samples for " +
                              std::to_string(spec.station_count) + " stations");
        }
    }

    const std::uint64_t n = labels.size();
    const std::uint64_t s = spec.station_count;

    // Seeded per-class shuffle over canonically sorted ids.
    for (std::size_t k = 0; k < groups.size(); ++k) {
        CounterRng rng({spec.seed, kPartitionTag, static_cast<std::uint64_t>(k)});
        fisher_yates(groups[k].ids, rng);
    }

    // Test pool first: proportional share of each class.
    std::vector<std::uint64_t> class_sizes, caps;
    for (const auto& g : groups) {
        class_sizes.push_back(g.ids.size());
        caps.push_back(g.ids.size());
    }
    const std::uint64_t test_total =
        floor_count(static_cast<double>(n) * spec.test_fraction);
    const std::vector<std::uint64_t> test_counts =
        apportion(test_total, class_sizes, caps);

    Partition out;
    out.spec = spec;
    out.shards.resize(s);
    for (std::uint64_t i = 0; i < s; ++i) {
        out.shards[i].station_id = static_cast<std::uint32_t>(i);
    }

    // Remaining samples per class go to stations: equal floor share, the
    // class remainders round-robin by ascending station id, with the
    // cursor carried across classes so shard sizes differ by at most one.
    std::vector<std::vector<std::vector<std::string>>> station_class_ids(
        s, std::vector<std::vector<std::string>>(groups.size()));
    std::uint64_t rr_cursor = 0;
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const auto& ids = groups[k].ids;
        const std::uint64_t t = test_counts[k];
        out.test.insert(out.test.end(), ids.begin(), ids.begin() + t);

        const std::uint64_t remainder = ids.size() - t;
        const std::uint64_t base = remainder / s;
        const std::uint64_t extra = remainder % s;
        std::vector<std::uint64_t> station_counts(s, base);
        for (std::uint64_t i = 0; i < extra; ++i) {
            ++station_counts[(rr_cursor + i) % s];
        }
        rr_cursor = (rr_cursor + extra) % s;

        std::uint64_t offset = t;
        for (std::uint64_t st = 0; st < s; ++st) {
            auto& slot = station_class_ids[st][k];
            slot.assign(ids.begin() + offset, ids.begin() + offset + station_counts[st]);
            offset += station_counts[st];
        }
    }

    // Per-shard train/validation: train = floor(size * (1 - vf)), the
    // validation remainder apportioned across classes.
    for (std::uint64_t st = 0; st < s; ++st) {
        std::uint64_t shard_size = 0;
        std::vector<std::uint64_t> class_counts(groups.size(), 0);
        for (std::size_t k = 0; k < groups.size(); ++k) {
            class_counts[k] = station_class_ids[st][k].size();
            shard_size += class_counts[k];
        }
        const std::uint64_t train_total = floor_count(
            static_cast<double>(shard_size) * (1.0 - spec.validation_fraction));
        const std::uint64_t val_total = shard_size - train_total;
        const std::vector<std::uint64_t> val_counts =
            apportion(val_total, class_counts, class_counts);

        auto& shard = out.shards[st];
        for (std::size_t k = 0; k < groups.size(); ++k) {
            const auto& ids = station_class_ids[st][k];
            const std::uint64_t v = val_counts[k];
            const std::uint64_t tr = ids.size() - v;
            shard.training.insert(shard.training.end(), ids.begin(), ids.begin() + tr);
            shard.validation.insert(shard.validation.end(), ids.begin() + tr, ids.end());
        }
        std::sort(shard.training.begin(), shard.training.end());
        std::sort(shard.validation.begin(), shard.validation.end());
    }
    std::sort(out.test.begin(), out.test.end());
    return out;
}

ClassSet infer_classes(const LabeledIds& labels) {
    std::set<std::string> distinct;
    for (const auto& [id, label] : labels) distinct.insert(label);
    return ClassSet(std::vector<std::string>(distinct.begin(), distinct.end()));
}

namespace {

DistributionRow make_row(const std::string& name,
                         const std::vector<std::string>& ids,
                         const std::map<std::string, std::string>& label_of,
                         const ClassSet& classes) {
    if (ids.empty()) throw ConfigError("empty split in distribution report: " + name);
    DistributionRow row;
    row.split = name;
    row.count = ids.size();
    std::vector<std::uint64_t> counts(classes.size(), 0);
    for (const auto& id : ids) {
        auto it = label_of.find(id);
        if (it == label_of.end()) throw NotFoundError("unlabeled sample id: " + id);
        ++counts[classes.index_of(it->second)];
    }
    row.proportions.resize(classes.size());
    for (std::size_t k = 0; k < classes.size(); ++k) {
        row.proportions[k] =
            static_cast<double>(counts[k]) / static_cast<double>(ids.size());
    }
    return row;
}

} // namespace

std::vector<DistributionRow> distribution_report(const Partition& partition,
                                                 const LabeledIds& labels,
                                                 const ClassSet& classes) {
    std::map<std::string, std::string> label_of(labels.begin(), labels.end());
    std::vector<DistributionRow> rows;
    rows.push_back(make_row("test", partition.test, label_of, classes));
    for (const auto& shard : partition.shards) {
        const std::string base = "station-" + std::to_string(shard.station_id);
        std::vector<std::string> all = shard.training;
        all.insert(all.end(), shard.validation.begin(), shard.validation.end());
        rows.push_back(make_row(base, all, label_of, classes));
        rows.push_back(make_row(base + "/train", shard.training, label_of, classes));
        rows.push_back(make_row(base + "/validation", shard.validation, label_of, classes));
    }
    return rows;
}

nlohmann::json to_json(const Partition& partition) {
    nlohmann::json stations = nlohmann::json::array();
    for (const auto& shard : partition.shards) {
        stations.push_back({{"id", shard.station_id},
                            {"train", shard.training},
                            {"validation", shard.validation}});
    }
    return {{"test", partition.test},
            {"stations", stations},
            {"seed", partition.spec.seed},
            {"spec",
             {{"test_fraction", partition.spec.test_fraction},
              {"station_count", partition.spec.station_count},
              {"validation_fraction", partition.spec.validation_fraction}}}};
}

Partition partition_from_json(const nlohmann::json& j) {
    Partition p;
    p.test = j.at("test").get<std::vector<std::string>>();
    for (const auto& st : j.at("stations")) {
        DatasetShard shard;
        shard.station_id = st.at("id").get<std::uint32_t>();
        shard.training = st.at("train").get<std::vector<std::string>>();
        shard.validation = st.at("validation").get<std::vector<std::string>>();
        p.shards.push_back(std::move(shard));
    }
    p.spec.seed = j.at("seed").get<std::uint64_t>();
    const auto& spec = j.at("spec");
    p.spec.test_fraction = spec.at("test_fraction").get<double>();
    p.spec.station_count = spec.at("station_count").get<std::uint32_t>();
    p.spec.validation_fraction = spec.at("validation_fraction").get<double>();
    return p;
}

} // namespace pht::partition
