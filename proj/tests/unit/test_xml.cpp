#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include <expat.h>

#include "metaharvest/core/text.hpp"
#include "metaharvest/ingest/xml_text.hpp"

using metaharvest::ingest::parse_structured_metadata;
using metaharvest::ingest::XmlParseError;

namespace {

// Event-based reference: element paths from start/end callbacks, character
// data accumulated per open element and emitted when the element closes.
struct ExpatOracle {
    std::vector<std::string> path;
    std::vector<std::string> text;
    std::vector<std::string> lines;

    static void on_start(void* data, XML_Char const* name, XML_Char const** attrs)
    {
        auto* self = static_cast<ExpatOracle*>(data);
        self->path.emplace_back(name);
        self->text.emplace_back();
        for (int i = 0; attrs[i] != nullptr; i += 2) {
            std::string const attr = attrs[i];
            if (attr == "xmlns" || attr.starts_with("xmlns:")) {
                continue;
            }
            self->lines.push_back(self->joined() + "/@" + attr + ": "
                                  + metaharvest::collapse_whitespace(attrs[i + 1]));
        }
    }
    static void on_end(void* data, XML_Char const*)
    {
        auto* self = static_cast<ExpatOracle*>(data);
        auto const value = metaharvest::collapse_whitespace(self->text.back());
        if (!value.empty()) {
            self->lines.push_back(self->joined() + ": " + value);
        }
        self->path.pop_back();
        self->text.pop_back();
    }
    static void on_chars(void* data, XML_Char const* s, int len)
    {
        static_cast<ExpatOracle*>(data)->text.back().append(s, static_cast<std::size_t>(len));
    }
    [[nodiscard]] auto joined() const -> std::string { return metaharvest::join(path, "/"); }

    static auto run(std::string const& xml) -> std::string
    {
        ExpatOracle oracle;
        XML_Parser parser = XML_ParserCreate("UTF-8");
        XML_SetUserData(parser, &oracle);
        XML_SetElementHandler(parser, on_start, on_end);
        XML_SetCharacterDataHandler(parser, on_chars);
        auto const status = XML_Parse(parser, xml.data(), static_cast<int>(xml.size()), 1);
        XML_ParserFree(parser);
        REQUIRE(status == XML_STATUS_OK);
        return metaharvest::join(oracle.lines, "\n");
    }
};

auto random_document(std::mt19937& rng) -> std::string
{
    static std::vector<std::string> const names = {"record", "title", "creator", "date", "gmd:keyword", "extent"};
    static std::vector<std::string> const words = {"Wadden", "Sea", "2016", "&amp;", "ecotope", "  ", "\n", "&lt;x&gt;"};
    auto word = [&] { return words[rng() % words.size()]; };
    auto rec = [&](auto&& self, int depth) -> std::string {
        auto const& name = names[rng() % names.size()];
        std::string out = "<" + name;
        if (rng() % 3 == 0) {
            out += " id=\"" + words[rng() % 4] + "\"";
        }
        out += ">";
        int const children = depth < 4 ? static_cast<int>(rng() % 4) : 0;
        if (children == 0 || rng() % 4 == 0) {
            out += word() + " " + word();
        }
        for (int i = 0; i < children; ++i) {
            out += self(self, depth + 1);
            if (rng() % 5 == 0) {
                out += word();
            }
        }
        if (rng() % 6 == 0) {
            out += "<![CDATA[raw <text> & more]]>";
        }
        return out + "</" + name + ">";
    };
    return "<?xml version=\"1.0\"?>\n<!-- generated -->\n" + rec(rec, 0);
}

}  // namespace

TEST_CASE("single leaf and empty element")
{
    CHECK(parse_structured_metadata("<a><b>x</b></a>") == "a/b: x");
    CHECK(parse_structured_metadata("<a/>") == "");
    CHECK(parse_structured_metadata("<a></a>") == "");
}

TEST_CASE("two leaves come out in document order")
{
    std::string const xml = "<meta><title>Ecotope map</title><date>2016-11-01</date></meta>";
    auto const out = parse_structured_metadata(xml);
    CHECK(out == "meta/title: Ecotope map\nmeta/date: 2016-11-01");
    CHECK(out == ExpatOracle::run(xml));
}

TEST_CASE("attributes, entities, CDATA and namespaces")
{
    std::string const xml = R"(<?xml version="1.0" encoding="UTF-8"?>
<!DOCTYPE rec>
<gmd:MD_Metadata xmlns:gmd="http://www.isotc211.org/2005/gmd">
  <gmd:language code="nld">Dutch</gmd:language>
  <gmd:abstract><![CDATA[Map of <ecotopes> & habitats]]></gmd:abstract>
  <gmd:title>R&amp;D &#233;t&#xE9;</gmd:title>
</gmd:MD_Metadata>)";
    auto const out = parse_structured_metadata(xml);
    CHECK(out == ExpatOracle::run(xml));
    CHECK(out.find("gmd:MD_Metadata/gmd:language/@code: nld") != std::string::npos);
    CHECK(out.find("gmd:MD_Metadata/gmd:abstract: Map of <ecotopes> & habitats") != std::string::npos);
    CHECK(out.find("R&D \xC3\xA9t\xC3\xA9") != std::string::npos);
}

TEST_CASE("random well-formed documents agree with the event-based oracle")
{
    std::mt19937 rng(2016);
    for (int i = 0; i < 300; ++i) {
        auto const xml = random_document(rng);
        INFO(xml);
        CHECK(parse_structured_metadata(xml) == ExpatOracle::run(xml));
    }
}

TEST_CASE("recoverable defects are repaired")
{
    CHECK(parse_structured_metadata("<a><b>x</b>") == "a/b: x");
    CHECK(parse_structured_metadata("<a><b>x</c></b></a>") == "a/b: x");
    CHECK(parse_structured_metadata("<a><b>x</a>") == "a/b: x");
    CHECK(parse_structured_metadata("<a>1 < 2</a>") == "a: 1 < 2");
}

TEST_CASE("unrecoverable input reports the byte offset")
{
    auto offset_of = [](std::string const& xml) -> std::size_t {
        try {
            (void)parse_structured_metadata(xml);
        }
        catch (XmlParseError const& e) {
            return e.offset();
        }
        FAIL("expected XmlParseError");
        return 0;
    };
    CHECK(offset_of("<a><b attr=\"x") == 3);
    CHECK(offset_of("<a><!-- never closed") == 3);
    CHECK(offset_of("<a><![CDATA[open") == 3);
    CHECK(offset_of("just text") == 0);
    CHECK(offset_of("") == 0);
}

TEST_CASE("invalid UTF-8 is replaced, not fatal")
{
    auto const out = parse_structured_metadata("<a>caf\xE9</a>");
    CHECK(out == "a: caf\xEF\xBF\xBD");
}
