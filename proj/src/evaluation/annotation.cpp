#include "metaharvest/evaluation/annotation.hpp"

#include <algorithm>

#include "metaharvest/core/error.hpp"
#include "metaharvest/core/text.hpp"
#include "metaharvest/extraction/record.hpp"

namespace metaharvest::evaluation {

auto to_string(Availability availability) -> char const*
{
    switch (availability) {
    case Availability::unavailable: return "unavailable";
    case Availability::structured: return "structured";
    case Availability::unstructured: return "unstructured";
    }
    return "unknown";
}

auto parse_availability(std::string_view text) -> std::optional<Availability>
{
    if (text == "unavailable") {
        return Availability::unavailable;
    }
    if (text == "structured") {
        return Availability::structured;
    }
    if (text == "unstructured") {
        return Availability::unstructured;
    }
    return std::nullopt;
}

auto annotation_from_json(nlohmann::json const& json) -> GroundTruthAnnotation
{
    try {
        GroundTruthAnnotation annotation;
        annotation.source_id = json.at("source_id").get<std::string>();
        annotation.schema_id = json.at("schema_id").get<std::string>();
        for (auto const& [field, item] : json.at("entries").items()) {
            AnnotationEntry entry;
            entry.value = item.at("value").get<std::string>();
            auto const availability = parse_availability(item.at("availability").get<std::string>());
            if (!availability) {
                throw Error("field '" + field + "': unknown availability '"
                            + item.at("availability").get<std::string>() + "'");
            }
            entry.availability = *availability;
            bool const na = extraction::is_not_available(entry.value);
            if ((entry.availability == Availability::unavailable) != na) {
                throw Error("field '" + field + "': availability 'unavailable' must go with value N/A and only then");
            }
            annotation.entries.emplace(field, std::move(entry));
        }
        return annotation;
    } catch (nlohmann::json::exception const& e) {
        throw Error(std::string("malformed annotation: ") + e.what());
    }
}

auto to_json(GroundTruthAnnotation const& annotation) -> nlohmann::ordered_json
{
    nlohmann::ordered_json entries = nlohmann::ordered_json::object();
    for (auto const& [field, entry] : annotation.entries) {
        entries[field] = {{"value", entry.value}, {"availability", to_string(entry.availability)}};
    }
    return {{"source_id", annotation.source_id}, {"schema_id", annotation.schema_id}, {"entries", entries}};
}

auto load_annotations(std::filesystem::path const& dir) -> store::LoadResult<GroundTruthAnnotation>
{
    store::LoadResult<GroundTruthAnnotation> result;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        result.errors.push_back("annotations directory not found: " + dir.string());
        return result;
    }
    std::vector<std::filesystem::path> files;
    for (auto const& item : std::filesystem::directory_iterator(dir)) {
        if (item.is_regular_file() && item.path().extension() == ".json") {
            files.push_back(item.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (auto const& file : files) {
        try {
            auto const json = nlohmann::json::parse(read_file(file.string()));
            if (json.is_array()) {
                for (auto const& item : json) {
                    result.items.push_back(annotation_from_json(item));
                }
            } else {
                result.items.push_back(annotation_from_json(json));
            }
        } catch (std::exception const& e) {
            result.errors.push_back(file.filename().string() + ": " + e.what());
        }
    }
    return result;
}

}  // namespace metaharvest::evaluation
