#include "pht/fhir/resources.hpp"

#include "pht/common/errors.hpp"
#include "pht/common/labels.hpp"

namespace pht::fhir {

namespace {

void expect_resource_type(const nlohmann::json& j, const char* expected,
                          const char* alias = nullptr) {
    const std::string type = j.at("resourceType").get<std::string>();
    if (type == expected) return;
    if (alias && type == alias) return;
    throw DataError(std::string("unexpected resourceType '") + type + "', wanted " +
                    expected);
}

} // namespace

void PatientResource::validate() const {
    if (id.empty()) throw ConfigError("Patient id must be non-empty");
    if (sex && *sex != "male" && *sex != "female" && *sex != "other") {
        throw ConfigError("Patient " + id + " has invalid sex value '" + *sex + "'");
    }
}

nlohmann::json PatientResource::to_json() const {
    nlohmann::json j = {{"resourceType", "Patient"},
                        {"id", id},
                        {"media_refs", media_refs}};
    j["age"] = age ? nlohmann::json(*age) : nlohmann::json(nullptr);
    j["sex"] = sex ? nlohmann::json(*sex) : nlohmann::json(nullptr);
    j["anatomical_site"] =
        anatomical_site ? nlohmann::json(*anatomical_site) : nlohmann::json(nullptr);
    return j;
}

PatientResource PatientResource::from_json(const nlohmann::json& j) {
    expect_resource_type(j, "Patient");
    PatientResource p;
    p.id = j.at("id").get<std::string>();
    if (j.contains("age") && !j.at("age").is_null()) {
        p.age = j.at("age").get<unsigned>();
    }
    if (j.contains("sex") && !j.at("sex").is_null()) {
        p.sex = j.at("sex").get<std::string>();
    }
    if (j.contains("anatomical_site") && !j.at("anatomical_site").is_null()) {
        p.anatomical_site = j.at("anatomical_site").get<std::string>();
    }
    if (j.contains("media_refs")) {
        p.media_refs = j.at("media_refs").get<std::vector<std::string>>();
    }
    p.validate();
    return p;
}

void MediaResource::validate() const {
    if (id.empty()) throw ConfigError("Media id must be non-empty");
    if (content_url.empty()) {
        throw ConfigError("Media " + id + " has an empty content_url");
    }
    if (!is_diagnosis_code(label)) {
        throw ConfigError("Media " + id + " has unknown diagnosis code '" + label + "'");
    }
}

nlohmann::json MediaResource::to_json() const {
    return {{"resourceType", "Media"},
            {"id", id},
            {"content_url", content_url},
            {"label", label}};
}

MediaResource MediaResource::from_json(const nlohmann::json& j) {
    expect_resource_type(j, "Media");
    MediaResource m;
    m.id = j.at("id").get<std::string>();
    m.content_url = j.at("content_url").get<std::string>();
    m.label = j.at("label").get<std::string>();
    m.validate();
    return m;
}

void ImageStudyResource::validate() const {
    if (id.empty()) throw ConfigError("ImageStudy id must be non-empty");
}

nlohmann::json ImageStudyResource::to_json() const {
    return {{"resourceType", "ImageStudy"},
            {"id", id},
            {"name", name},
            {"patient_refs", patient_refs}};
}

ImageStudyResource ImageStudyResource::from_json(const nlohmann::json& j) {
    expect_resource_type(j, "ImageStudy", "ImagingStudy");
    ImageStudyResource s;
    s.id = j.at("id").get<std::string>();
    s.name = j.at("name").get<std::string>();
    s.patient_refs = j.at("patient_refs").get<std::vector<std::string>>();
    s.validate();
    return s;
}

} // namespace pht::fhir
