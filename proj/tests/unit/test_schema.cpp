#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "metaharvest/core/text.hpp"
#include "metaharvest/schema/schema.hpp"
#include "support/temp_dir.hpp"

using namespace metaharvest;
using namespace metaharvest::schema;

namespace {

auto names_of(MetadataSchema const& s) -> std::set<std::string>
{
    auto const v = s.field_names();
    return {v.begin(), v.end()};
}

auto fuzzy_of(MetadataSchema const& s) -> std::set<std::string>
{
    std::set<std::string> out;
    for (auto const& f : s.fields) {
        if (f.match_mode == MatchMode::fuzzy) {
            out.insert(f.name);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("built-in LTER-LIFE schema")
{
    auto const s = builtin_schema("lter-life");
    CHECK(s.schema_id == "lter-life");
    CHECK(s.fields.size() == 21);
    CHECK(s.group_names().size() == 7);
    CHECK(fuzzy_of(s) == std::set<std::string>{"Description", "Keywords"});
    CHECK(s.find("Same as") == nullptr);
    for (auto const& f : s.fields) {
        CHECK_FALSE(trim(f.definition).empty());
        CHECK((f.standard_ref == "ISO 19115" || f.standard_ref == "DCAT-AP"));
    }
}

TEST_CASE("built-in Croissant schema")
{
    auto const s = builtin_schema("croissant");
    CHECK(s.fields.size() == 10);
    CHECK(names_of(s) == std::set<std::string>{"Metadata language", "Title", "Description", "Keywords",
                                               "Data creator", "Data publisher", "License", "Same as",
                                               "Date published", "Date last modified"});
    REQUIRE(s.find("Same as") != nullptr);
    for (auto const& f : s.fields) {
        CHECK_FALSE(trim(f.definition).empty());
        CHECK(f.standard_ref == "Croissant");
    }
}

TEST_CASE("built-in schemas share exactly the seven common fields")
{
    auto const a = names_of(builtin_schema("lter-life"));
    auto const b = names_of(builtin_schema("croissant"));
    std::set<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(common, common.end()));
    CHECK(common == std::set<std::string>{"Metadata language", "Title", "Description", "Keywords", "Data creator",
                                          "Data publisher", "License"});
}

TEST_CASE("unknown built-in id")
{
    CHECK_THROWS_AS((void)builtin_schema("unknown"), UnknownSchemaError);
}

TEST_CASE("serialize is the canonical form of the shipped files")
{
    for (auto const& id : builtin_schema_ids()) {
        auto const text = std::string(builtin_schema_json(id));
        CHECK(serialize(parse_schema(text)) == text);
        CHECK(parse_schema(serialize(builtin_schema(id))) == builtin_schema(id));
    }
}

TEST_CASE("load_schema round-trips a user file and canonicalises layout")
{
    testing::TempDir dir;
    auto const path = dir / "mine.json";
    std::ofstream(path) << R"({"fields":[{"standard_ref":"local","match_mode":"fuzzy","definition":"What it is.",
        "group":"Identification","name":"Summary"}],"schema_id":"mine"})";
    auto const s = load_schema(path.string());
    CHECK(s.schema_id == "mine");
    REQUIRE(s.fields.size() == 1);
    CHECK(s.fields[0].match_mode == MatchMode::fuzzy);
    auto const canonical = serialize(s);
    CHECK(canonical.find("\"schema_id\": \"mine\"") < canonical.find("\"fields\""));
    CHECK(serialize(parse_schema(canonical)) == canonical);
    CHECK(resolve_schema(path.string()) == s);
}

TEST_CASE("duplicate field names are rejected with the field named")
{
    std::string const text = R"({"schema_id":"dup","fields":[
        {"name":"Title","group":"g","definition":"d","match_mode":"exact","standard_ref":"x"},
        {"name":"title","group":"g","definition":"d","match_mode":"exact","standard_ref":"x"}]})";
    try {
        (void)parse_schema(text);
        FAIL("expected SchemaValidationError");
    }
    catch (SchemaValidationError const& e) {
        CHECK(iequals(e.field(), "Title"));
    }
}

TEST_CASE("schema validation errors")
{
    CHECK_THROWS_AS((void)parse_schema(R"({"schema_id":"x","fields":[]})"), SchemaValidationError);
    CHECK_THROWS_AS(
        (void)parse_schema(R"({"schema_id":"x","fields":[{"name":"A","group":"g","definition":"  ","match_mode":"exact","standard_ref":""}]})"),
        SchemaValidationError);
    CHECK_THROWS_AS(
        (void)parse_schema(R"({"schema_id":"x","fields":[{"name":"A","group":"g","definition":"d","match_mode":"loose","standard_ref":""}]})"),
        SchemaValidationError);
    CHECK_THROWS_AS(
        (void)parse_schema(R"({"schema_id":"","fields":[{"name":"A","group":"g","definition":"d","match_mode":"exact","standard_ref":""}]})"),
        SchemaValidationError);
}

TEST_CASE("parse errors carry line information")
{
    try {
        (void)parse_schema("{\n  \"schema_id\": \"x\",\n  \"fields\": [\n    {,}\n  ]\n}");
        FAIL("expected SchemaParseError");
    }
    catch (SchemaParseError const& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() >= 1);
    }
}
