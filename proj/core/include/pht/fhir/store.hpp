#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "pht/common/sha256.hpp"
#include "pht/fhir/resources.hpp"
#include "pht/preprocess/image.hpp"

namespace pht::fhir {

// Blob storage keyed by location URL. get(put(k, b)) == b.
class ObjectStore {
public:
    void put(const std::string& key, std::vector<std::uint8_t> bytes);
    std::vector<std::uint8_t> get(const std::string& key) const;
    bool contains(const std::string& key) const;
    void erase(const std::string& key);
    std::size_t size() const;
    std::vector<std::string> keys() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::vector<std::uint8_t>> blobs_;
};

// The station's resource database. Concurrent readers are fine; ingest
// happens exclusively before any Train runs.
class StationStore {
public:
    void put_patient(PatientResource p);
    void put_media(MediaResource m);
    void put_study(ImageStudyResource s);

    const PatientResource& patient(const std::string& id) const;
    const MediaResource& media(const std::string& id) const;
    const ImageStudyResource& study(const std::string& id) const;

    bool has_patient(const std::string& id) const { return patients_.count(id) > 0; }
    bool has_media(const std::string& id) const { return media_.count(id) > 0; }
    bool has_study(const std::string& id) const { return studies_.count(id) > 0; }

    // Patient ids of a study, ascending.
    std::vector<std::string> patients_of_study(const std::string& study_id) const;

    std::size_t patient_count() const { return patients_.size(); }
    std::size_t media_count() const { return media_.size(); }
    std::size_t study_count() const { return studies_.size(); }
    std::vector<std::string> study_ids() const;

    // Every media_ref and patient_ref must resolve. Throws DataError
    // naming the first dangling id.
    void check_referential_integrity() const;

    // Digest over the canonical JSON of all resources; used to assert
    // that reads leave the store untouched.
    Sha256Digest content_digest() const;

private:
    std::map<std::string, PatientResource> patients_;
    std::map<std::string, MediaResource> media_;
    std::map<std::string, ImageStudyResource> studies_;
};

// One sample as handed to a station for ingestion.
struct IngestSample {
    std::string sample_id;
    std::vector<std::uint8_t> png;
    std::string label; // diagnostic class code
    std::optional<unsigned> age;
    std::optional<std::string> sex;
    std::optional<std::string> anatomical_site;
};

std::string patient_id_for(const std::string& sample_id);
std::string media_id_for(const std::string& sample_id);
std::string blob_key_for(std::uint32_t station_id, const std::string& sample_id);
std::string study_id_for(const std::string& experiment_name);

// One Patient + one Media per sample, blobs stored at their content_url,
// and a single ImageStudy named for the experiment referencing all
// patients. Rejects duplicate ids without modifying the store.
// Returns the study id.
std::string ingest(StationStore& store, ObjectStore& objects, std::uint32_t station_id,
                   const std::string& experiment_name,
                   std::span<const IngestSample> samples);

struct ResolvedSample {
    std::string patient_id;
    std::string media_id;
    preprocess::RawImage image;
    std::string label;
};

// Walks the study's patients in ascending id order, fetches and decodes
// every referenced blob. Read-only. Any dangling reference, missing blob
// or undecodable payload fails the whole resolution with the offending id.
std::vector<ResolvedSample> resolve_dataset(const StationStore& store,
                                            const ObjectStore& objects,
                                            const std::string& study_id);

} // namespace pht::fhir
