#include "pht/harness/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pht/preprocess/png_io.hpp"
#include "pht/preprocess/synth.hpp"

namespace pht::harness {

const DatasetSample& Dataset::by_id(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) throw NotFoundError("unknown sample id: " + id);
    return samples[it->second];
}

partition::LabeledIds Dataset::labeled_ids() const {
    partition::LabeledIds out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.emplace_back(s.id, s.label);
    return out;
}

std::vector<std::pair<std::string, std::string>> read_labels_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open labels file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("labels file is empty: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "filename,label") {
        throw DataError("labels file must start with header 'filename,label': " +
                        path.string());
    }
    std::vector<std::pair<std::string, std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'filename,label'");
        }
        rows.emplace_back(line.substr(0, comma), line.substr(comma + 1));
    }
    return rows;
}

namespace {

constexpr std::uint64_t kSynthSeedTag = 0x64617461; // "data"

Dataset from_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    Dataset d;
    d.classes = ClassSet::diagnosis_codes();
    auto generated = preprocess::synth_dataset(spec.n, spec.proportions,
                                               spec.image_size, seed);
    d.samples.reserve(generated.size());
    for (auto& g : generated) {
        DatasetSample s;
        s.id = g.id;
        s.png = preprocess::encode_png(g.image);
        s.image = std::move(g.image);
        s.label = d.classes.code(g.label);
        s.age = g.age;
        s.sex = g.sex;
        s.anatomical_site = g.anatomical_site;
        d.samples.push_back(std::move(s));
    }
    std::sort(d.samples.begin(), d.samples.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < d.samples.size(); ++i) d.index[d.samples[i].id] = i;
    return d;
}

Dataset from_directory(const DirectorySpec& spec) {
    Dataset d;
    d.classes = ClassSet::diagnosis_codes();
    const auto rows = read_labels_csv(spec.path / spec.labels_csv);
    if (rows.empty()) throw DataError("labels file lists no samples");
    for (const auto& [filename, label] : rows) {
        if (!d.classes.contains(label)) {
            throw DataError("sample " + filename + " has unknown diagnosis code '" +
                            label + "'");
        }
        const std::filesystem::path file = spec.path / filename;
        std::ifstream in(file, std::ios::binary);
        if (!in) throw DataError("cannot open image file: " + file.string());
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
        DatasetSample s;
        s.id = std::filesystem::path(filename).stem().string();
        s.png = std::move(bytes);
        s.image = preprocess::decode_png(s.png);
        s.label = label;
        d.samples.push_back(std::move(s));
    }
    std::sort(d.samples.begin(), d.samples.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        if (i > 0 && d.samples[i].id == d.samples[i - 1].id) {
            throw DataError("duplicate sample id: " + d.samples[i].id);
        }
        d.index[d.samples[i].id] = i;
    }
    return d;
}

} // namespace

Dataset load_dataset(const ExperimentConfig& config, std::uint64_t seed) {
    if (config.synthetic) {
        return from_synthetic(*config.synthetic, mix_seed({seed, kSynthSeedTag}));
    }
    if (config.directory) {
        return from_directory(*config.directory);
    }
    throw ConfigError("config names no dataset source");
}

} // namespace pht::harness
