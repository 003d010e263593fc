#include "metaharvest/extraction/record.hpp"

#include "metaharvest/core/error.hpp"
#include "metaharvest/core/text.hpp"

namespace metaharvest::extraction {

auto is_not_available(std::string_view value) -> bool { return iequals(trim(value), kNotAvailable); }

auto to_string(Stage stage) -> char const*
{
    return stage == Stage::raw ? "raw" : "postprocessed";
}

auto parse_stage(std::string_view text) -> std::optional<Stage>
{
    if (text == "raw") {
        return Stage::raw;
    }
    if (text == "postprocessed") {
        return Stage::postprocessed;
    }
    return std::nullopt;
}

auto MetadataRecord::find(std::string_view field) const -> std::string const*
{
    for (auto const& entry : entries) {
        if (entry.field == field) {
            return &entry.value;
        }
    }
    return nullptr;
}

auto to_json(MetadataRecord const& record) -> nlohmann::ordered_json
{
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (auto const& entry : record.entries) {
        entries.push_back({{"field", entry.field}, {"value", entry.value}});
    }
    auto const& p = record.provenance;
    return {
        {"source_id", record.source_id},
        {"schema_id", record.schema_id},
        {"stage", to_string(record.stage)},
        {"entries", std::move(entries)},
        {"provenance",
         {{"model", p.model},
          {"prompt_hash", p.prompt_hash},
          {"timestamp", p.timestamp},
          {"prompt_version", p.prompt_version},
          {"inference_policy", p.inference_policy},
          {"truncated", p.truncated},
          {"downgraded", p.downgraded}}},
    };
}

auto record_from_json(nlohmann::ordered_json const& json) -> MetadataRecord
{
    try {
        MetadataRecord record;
        record.source_id = json.at("source_id").get<std::string>();
        record.schema_id = json.at("schema_id").get<std::string>();
        auto const stage = parse_stage(json.at("stage").get<std::string>());
        if (!stage) {
            throw Error("unknown stage '" + json.at("stage").get<std::string>() + "'");
        }
        record.stage = *stage;
        for (auto const& entry : json.at("entries")) {
            record.entries.push_back({entry.at("field").get<std::string>(), entry.at("value").get<std::string>()});
        }
        if (json.contains("provenance")) {
            auto const& p = json["provenance"];
            record.provenance.model = p.value("model", "");
            record.provenance.prompt_hash = p.value("prompt_hash", "");
            record.provenance.timestamp = p.value("timestamp", "");
            record.provenance.prompt_version = p.value("prompt_version", "");
            record.provenance.inference_policy = p.value("inference_policy", "");
            record.provenance.truncated = p.value("truncated", false);
            record.provenance.downgraded = p.value("downgraded", false);
        }
        if (record.source_id.empty()) {
            throw Error("empty source_id");
        }
        return record;
    } catch (nlohmann::json::exception const& e) {
        throw Error(std::string("malformed record: ") + e.what());
    }
}

}  // namespace metaharvest::extraction
