#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pht::fhir {

// Minimal three-resource subset of FHIR: just enough structure to model
// patients, their lesion images and the study that groups them.

struct PatientResource {
    std::string id;
    std::optional<unsigned> age; // years
    std::optional<std::string> sex; // male | female | other
    std::optional<std::string> anatomical_site;
    std::vector<std::string> media_refs;

    void validate() const;
    nlohmann::json to_json() const;
    static PatientResource from_json(const nlohmann::json& j);
};

struct MediaResource {
    std::string id;
    std::string content_url; // object store key
    std::string label;       // diagnostic class code

    void validate() const;
    nlohmann::json to_json() const;
    static MediaResource from_json(const nlohmann::json& j);
};

// The paper's spelling is ImageStudy; "ImagingStudy" is accepted as an
// alias on ingest.
struct ImageStudyResource {
    std::string id;
    std::string name;
    std::vector<std::string> patient_refs;

    void validate() const;
    nlohmann::json to_json() const;
    static ImageStudyResource from_json(const nlohmann::json& j);
};

} // namespace pht::fhir
