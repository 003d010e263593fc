#include "metaharvest/ingest/json_text.hpp"

#include <vector>

#include <nlohmann/json.hpp>

#include "metaharvest/core/text.hpp"

namespace metaharvest::ingest {

namespace {

using ordered = nlohmann::ordered_json;

void walk(ordered const& node, std::string const& path, std::vector<std::string>& lines)
{
    if (node.is_object()) {
        for (auto const& [key, value] : node.items()) {
            walk(value, path.empty() ? key : path + "/" + key, lines);
        }
    } else if (node.is_array()) {
        for (auto const& value : node) {
            walk(value, path, lines);
        }
    } else if (!node.is_null()) {
        auto const text = node.is_string() ? collapse_whitespace(node.get<std::string>()) : node.dump();
        if (!text.empty()) {
            lines.push_back((path.empty() ? std::string("value") : path) + ": " + text);
        }
    }
}

}  // namespace

auto linearize_json(std::string_view json) -> std::optional<std::string>
{
    auto const doc = ordered::parse(sanitize_utf8(json), nullptr, false);
    if (doc.is_discarded()) {
        return std::nullopt;
    }
    std::vector<std::string> lines;
    walk(doc, "", lines);
    return join(lines, "\n");
}

}  // namespace metaharvest::ingest
