#include "pht/fhir/store.hpp"

#include <algorithm>
#include <set>

#include "pht/common/errors.hpp"
#include "pht/preprocess/png_io.hpp"

namespace pht::fhir {

void ObjectStore::put(const std::string& key, std::vector<std::uint8_t> bytes) {
    std::unique_lock lock(mutex_);
    blobs_[key] = std::move(bytes);
}

std::vector<std::uint8_t> ObjectStore::get(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = blobs_.find(key);
    if (it == blobs_.end()) throw NotFoundError("no blob at key: " + key);
    return it->second;
}

bool ObjectStore::contains(const std::string& key) const {
    std::shared_lock lock(mutex_);
    return blobs_.count(key) > 0;
}

void ObjectStore::erase(const std::string& key) {
    std::unique_lock lock(mutex_);
    blobs_.erase(key);
}

std::size_t ObjectStore::size() const {
    std::shared_lock lock(mutex_);
    return blobs_.size();
}

std::vector<std::string> ObjectStore::keys() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    out.reserve(blobs_.size());
    for (const auto& [k, _] : blobs_) out.push_back(k);
    return out;
}

void StationStore::put_patient(PatientResource p) {
    p.validate();
    if (!patients_.emplace(p.id, p).second) {
        throw DataError("duplicate Patient id: " + p.id);
    }
}

void StationStore::put_media(MediaResource m) {
    m.validate();
    if (!media_.emplace(m.id, m).second) {
        throw DataError("duplicate Media id: " + m.id);
    }
}

void StationStore::put_study(ImageStudyResource s) {
    s.validate();
    if (!studies_.emplace(s.id, s).second) {
        throw DataError("duplicate ImageStudy id: " + s.id);
    }
}

const PatientResource& StationStore::patient(const std::string& id) const {
    auto it = patients_.find(id);
    if (it == patients_.end()) throw NotFoundError("no Patient with id: " + id);
    return it->second;
}

const MediaResource& StationStore::media(const std::string& id) const {
    auto it = media_.find(id);
    if (it == media_.end()) throw NotFoundError("no Media with id: " + id);
    return it->second;
}

const ImageStudyResource& StationStore::study(const std::string& id) const {
    auto it = studies_.find(id);
    if (it == studies_.end()) throw NotFoundError("no ImageStudy with id: " + id);
    return it->second;
}

std::vector<std::string> StationStore::patients_of_study(const std::string& study_id) const {
    std::vector<std::string> refs = study(study_id).patient_refs;
    std::sort(refs.begin(), refs.end());
    return refs;
}

std::vector<std::string> StationStore::study_ids() const {
    std::vector<std::string> out;
    out.reserve(studies_.size());
    for (const auto& [id, _] : studies_) out.push_back(id);
    return out;
}

void StationStore::check_referential_integrity() const {
    for (const auto& [id, patient] : patients_) {
        for (const auto& ref : patient.media_refs) {
            if (!has_media(ref)) {
                throw DataError("Patient " + id + " references missing Media " + ref);
            }
        }
    }
    for (const auto& [id, study] : studies_) {
        for (const auto& ref : study.patient_refs) {
            if (!has_patient(ref)) {
                throw DataError("ImageStudy " + id + " references missing Patient " + ref);
            }
        }
    }
}

Sha256Digest StationStore::content_digest() const {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& [_, p] : patients_) all.push_back(p.to_json());
    for (const auto& [_, m] : media_) all.push_back(m.to_json());
    for (const auto& [_, s] : studies_) all.push_back(s.to_json());
    return sha256(all.dump());
}

std::string patient_id_for(const std::string& sample_id) { return "patient-" + sample_id; }
std::string media_id_for(const std::string& sample_id) { return "media-" + sample_id; }

std::string blob_key_for(std::uint32_t station_id, const std::string& sample_id) {
    return "station-" + std::to_string(station_id) + "/" + sample_id + ".png";
}

std::string study_id_for(const std::string& experiment_name) {
    return "study-" + experiment_name;
}

std::string ingest(StationStore& store, ObjectStore& objects, std::uint32_t station_id,
                   const std::string& experiment_name,
                   std::span<const IngestSample> samples) {
    if (samples.empty()) throw ConfigError("cannot ingest an empty shard");
    const std::string study_id = study_id_for(experiment_name);

    // Validate everything up front so a rejection leaves the store untouched.
    std::set<std::string> seen;
    for (const auto& s : samples) {
        if (s.sample_id.empty()) throw ConfigError("sample id must be non-empty");
        if (!seen.insert(s.sample_id).second) {
            throw DataError("duplicate sample id in shard: " + s.sample_id);
        }
        if (store.has_patient(patient_id_for(s.sample_id)) ||
            store.has_media(media_id_for(s.sample_id))) {
            throw DataError("sample already ingested: " + s.sample_id);
        }
        MediaResource probe{media_id_for(s.sample_id),
                            blob_key_for(station_id, s.sample_id), s.label};
        probe.validate();
    }
    if (store.has_study(study_id)) {
        throw DataError("experiment already ingested: " + study_id);
    }

    ImageStudyResource study;
    study.id = study_id;
    study.name = experiment_name;
    for (const auto& s : samples) {
        MediaResource media{media_id_for(s.sample_id),
                            blob_key_for(station_id, s.sample_id), s.label};
        PatientResource patient;
        patient.id = patient_id_for(s.sample_id);
        patient.age = s.age;
        patient.sex = s.sex;
        patient.anatomical_site = s.anatomical_site;
        patient.media_refs = {media.id};
        objects.put(media.content_url, s.png);
        store.put_media(std::move(media));
        store.put_patient(std::move(patient));
        study.patient_refs.push_back(patient_id_for(s.sample_id));
    }
    store.put_study(std::move(study));
    return study_id;
}

std::vector<ResolvedSample> resolve_dataset(const StationStore& store,
                                            const ObjectStore& objects,
                                            const std::string& study_id) {
    std::vector<ResolvedSample> out;
    for (const std::string& patient_id : store.patients_of_study(study_id)) {
        if (!store.has_patient(patient_id)) {
            throw DataError("ImageStudy " + study_id + " references missing Patient " +
                            patient_id);
        }
        const PatientResource& patient = store.patient(patient_id);
        if (patient.media_refs.size() != 1) {
            throw DataError("Patient " + patient_id + " must reference exactly one Media");
        }
        const std::string& media_id = patient.media_refs.front();
        if (!store.has_media(media_id)) {
            throw DataError("Patient " + patient_id + " references missing Media " +
                            media_id);
        }
        const MediaResource& media = store.media(media_id);
        std::vector<std::uint8_t> blob;
        try {
            blob = objects.get(media.content_url);
        } catch (const NotFoundError&) {
            throw DataError("Media " + media_id + " points at missing blob " +
                            media.content_url);
        }
        preprocess::RawImage image;
        try {
            image = preprocess::decode_png(blob);
        } catch (const DataError& e) {
            throw DataError("Media " + media_id + " blob is undecodable: " + e.what());
        }
        out.push_back({patient_id, media_id, std::move(image), media.label});
    }
    return out;
}

} // namespace pht::fhir
