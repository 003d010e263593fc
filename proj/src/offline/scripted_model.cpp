#include "metaharvest/offline/scripted_model.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

#include "metaharvest/core/text.hpp"
#include "metaharvest/evaluation/llm_metrics.hpp"
#include "metaharvest/evaluation/rouge.hpp"
#include "metaharvest/extraction/entities.hpp"
#include "metaharvest/extraction/prompt.hpp"
#include "metaharvest/linking/temporal.hpp"

namespace metaharvest::offline {

namespace chr = std::chrono;

auto prompt_sections(std::string_view text) -> std::map<std::string, std::string>
{
    std::map<std::string, std::string> sections;
    std::string* current = nullptr;
    for (auto line : split_lines(text)) {
        if (line.size() > 6 && line.starts_with("---") && line.ends_with("---")
            && line.find('-', 3) == line.size() - 3) {
            current = &sections[std::string(line.substr(3, line.size() - 6))];
            continue;
        }
        if (current != nullptr) {
            current->append(line).append("\n");
        }
    }
    for (auto& [name, body] : sections) {
        while (!body.empty() && is_space(body.back())) {
            body.pop_back();
        }
    }
    return sections;
}

namespace {

auto heading_name(std::string_view heading) -> std::string
{
    return std::string(heading.substr(3, heading.size() - 6));
}

auto section(std::map<std::string, std::string> const& sections, std::string_view heading) -> std::string
{
    auto const it = sections.find(heading_name(heading));
    return it == sections.end() ? std::string() : it->second;
}

auto user_text(llm::ChatRequest const& request) -> std::string
{
    std::string out;
    for (auto const& m : request.messages) {
        if (m.role == llm::Role::user) {
            out += m.text + "\n";
        }
    }
    return out;
}

// Entity types listed as "- Name: definition" lines.
auto schema_from_prompt(std::string const& entity_types) -> schema::MetadataSchema
{
    schema::MetadataSchema schema;
    schema.schema_id = "prompt";
    for (auto line : split_lines(entity_types)) {
        if (!line.starts_with("- ")) {
            continue;
        }
        line.remove_prefix(2);
        auto const colon = line.find(": ");
        schema::FieldDefinition field;
        field.name = std::string(trim(line.substr(0, colon)));
        field.definition = colon == std::string_view::npos ? field.name : std::string(line.substr(colon + 2));
        schema.fields.push_back(std::move(field));
    }
    return schema;
}

auto normalize_label(std::string_view label) -> std::string
{
    auto const slash = label.rfind('/');
    if (slash != std::string_view::npos) {
        label = label.substr(slash + 1);
    }
    std::string out;
    for (char c : label) {
        if (c == '_' || c == '-') {
            out += ' ';
        }
        else if (c != '@' && c != '*' && c != '"') {
            out += c;
        }
    }
    return to_lower_ascii(collapse_whitespace(out));
}

auto respond_extraction(llm::ChatRequest const& request) -> std::string
{
    auto const sections = prompt_sections(user_text(request));
    auto const schema = schema_from_prompt(section(sections, extraction::prompts::kEntityTypes));
    std::map<std::string, std::size_t> field_index;
    for (std::size_t i = 0; i < schema.fields.size(); ++i) {
        field_index[to_lower_ascii(schema.fields[i].name)] = i;
    }

    std::vector<std::vector<std::string>> values(schema.fields.size());
    auto const add = [&](std::size_t i, std::string_view value) {
        auto v = collapse_whitespace(value);
        if (!v.empty() && std::find(values[i].begin(), values[i].end(), v) == values[i].end()) {
            values[i].push_back(std::move(v));
        }
    };
    auto const text = section(sections, extraction::prompts::kDocument) + "\n"
                      + section(sections, extraction::prompts::kStructured);
    auto const lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        auto const line = trim(lines[n]);
        auto const colon = line.find(':');
        if (colon != std::string_view::npos) {
            auto const it = field_index.find(normalize_label(line.substr(0, colon)));
            if (it != field_index.end()) {
                add(it->second, line.substr(colon + 1));
                continue;
            }
        }
        auto const it = field_index.find(normalize_label(line));
        if (it != field_index.end() && n + 1 < lines.size() && !trim(lines[n + 1]).empty()) {
            add(it->second, lines[n + 1]);
            ++n;
        }
    }

    std::string out;
    for (std::size_t i = 0; i < schema.fields.size(); ++i) {
        if (values[i].empty()) {
            out += extraction::format_entity(schema.fields[i].name, extraction::kNotAvailable) + "\n";
        }
        for (auto const& v : values[i]) {
            out += extraction::format_entity(schema.fields[i].name, v) + "\n";
        }
    }
    return out;
}

auto respond_postprocess(llm::ChatRequest const& request) -> std::string
{
    auto const sections = prompt_sections(user_text(request));
    auto const schema = schema_from_prompt(section(sections, extraction::prompts::kEntityTypes));
    std::vector<extraction::RecordEntry> entries;
    try {
        auto const parsed = extraction::parse_entity_response(section(sections, extraction::prompts::kEntities), schema);
        for (auto const& e : parsed.entities) {
            entries.push_back({e.field_name, e.value});
        }
    }
    catch (extraction::EmptyExtractionError const&) {
    }
    std::string out;
    for (auto const& entry : extraction::collapse_entries(schema, entries)) {
        out += extraction::format_entity(entry.field, entry.value) + "\n";
    }
    return out;
}

auto respond_temporal(llm::ChatRequest const& request) -> std::string
{
    // Only the first user message carries the task; corrections get the same answer.
    auto const sections = prompt_sections(request.messages.at(1).text);
    auto const coverage = section(sections, linking::prompts::kCoverage);
    std::optional<chr::year_month_day> present;
    for (auto line : split_lines(request.messages.at(1).text)) {
        if (line.starts_with(linking::prompts::kPresentDate)) {
            present = linking::parse_date(trim(line.substr(linking::prompts::kPresentDate.size())));
        }
    }
    if (!present) {
        throw llm::LlmError(llm::LlmError::Kind::malformed, "temporal prompt without a present date");
    }
    auto const range = rule_based_range(coverage, *present);
    return range ? linking::to_string(*range) : "unknown";
}

auto statements_of(std::string_view answer) -> std::vector<std::string>
{
    std::vector<std::string> out;
    std::string current;
    auto const flush = [&] {
        auto s = collapse_whitespace(current);
        while (!s.empty() && (s.back() == '.' || s.back() == ';')) {
            s.pop_back();
        }
        if (!s.empty()) {
            out.push_back(s);
        }
        current.clear();
    };
    for (std::size_t i = 0; i < answer.size(); ++i) {
        char const c = answer[i];
        bool const boundary = (c == ';' || c == '.' || c == '!' || c == '?')
                              && (i + 1 == answer.size() || is_space(answer[i + 1]));
        current += c;
        if (boundary) {
            flush();
        }
    }
    flush();
    return out;
}

auto respond_statements(llm::ChatRequest const& request) -> std::string
{
    auto const sections = prompt_sections(user_text(request));
    nlohmann::json json;
    json["statements"] = statements_of(section(sections, evaluation::prompts::kAnswer));
    return json.dump();
}

auto respond_verdicts(llm::ChatRequest const& request) -> std::string
{
    auto const sections = prompt_sections(user_text(request));
    auto const context_tokens = evaluation::tokenize(section(sections, evaluation::prompts::kContext));
    std::set<std::string> const vocabulary(context_tokens.begin(), context_tokens.end());
    nlohmann::json verdicts = nlohmann::json::array();
    auto const statements = section(sections, evaluation::prompts::kStatements);
    for (auto line : split_lines(statements)) {
        auto const dot = line.find(". ");
        if (dot == std::string_view::npos) {
            continue;
        }
        auto const statement = std::string(line.substr(dot + 2));
        auto const tokens = evaluation::tokenize(statement);
        bool const supported = std::all_of(tokens.begin(), tokens.end(),
                                           [&](std::string const& t) { return vocabulary.contains(t); });
        verdicts.push_back({{"statement", statement},
                            {"reason", supported ? "all terms occur in the context" : "terms missing from the context"},
                            {"verdict", supported ? 1 : 0}});
    }
    return nlohmann::json{{"verdicts", verdicts}}.dump();
}

auto respond_questions(llm::ChatRequest const& request) -> std::string
{
    auto const sections = prompt_sections(user_text(request));
    auto const answer = collapse_whitespace(section(sections, evaluation::prompts::kAnswer));
    auto const subject = utf8_prefix(answer, 80);
    return nlohmann::json{{"questions",
                           {"What is " + std::string(subject) + "?", "Which dataset is about " + std::string(subject) + "?",
                            "What does " + std::string(subject) + " describe?"}}}
        .dump();
}

auto month_number(std::string_view name) -> unsigned
{
    static constexpr std::string_view kMonths[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                                   "jul", "aug", "sep", "oct", "nov", "dec"};
    auto const lower = to_lower_ascii(name.substr(0, 3));
    for (unsigned i = 0; i < 12; ++i) {
        if (lower == kMonths[i]) {
            return i + 1;
        }
    }
    return 0;
}

}  // namespace

auto rule_based_range(std::string_view text, chr::year_month_day present_date)
    -> std::optional<linking::CanonicalDateRange>
{
    static std::regex const pattern(
        R"((\d{4})-(\d{2})-(\d{2}))"
        R"(|\b(jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|aug(?:ust)?|sep(?:t(?:ember)?)?|oct(?:ober)?|nov(?:ember)?|dec(?:ember)?)\.?\s+(\d{1,2})(?:st|nd|rd|th)?,?\s+(\d{4}))"
        R"(|\b(jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|aug(?:ust)?|sep(?:t(?:ember)?)?|oct(?:ober)?|nov(?:ember)?|dec(?:ember)?)\.?\s+(\d{4}))"
        R"(|\b(\d{4})\b)"
        R"(|\b(present|to date|ongoing|now)\b)",
        std::regex::ECMAScript | std::regex::icase);

    std::optional<chr::sys_days> first;
    std::optional<chr::sys_days> last;
    auto const cover = [&](chr::year_month_day from, chr::year_month_day to) {
        if (!from.ok() || !to.ok()) {
            return;
        }
        chr::sys_days const a{from};
        chr::sys_days const b{to};
        first = first ? std::min(*first, a) : a;
        last = last ? std::max(*last, b) : b;
    };
    auto const to_int = [](std::ssub_match const& m) { return std::stoi(m.str()); };

    std::string const owned(text);
    for (auto it = std::sregex_iterator(owned.begin(), owned.end(), pattern); it != std::sregex_iterator(); ++it) {
        auto const& m = *it;
        if (m[1].matched) {
            chr::year_month_day const d{chr::year{to_int(m[1])}, chr::month{static_cast<unsigned>(to_int(m[2]))},
                                        chr::day{static_cast<unsigned>(to_int(m[3]))}};
            cover(d, d);
        }
        else if (m[4].matched) {
            chr::year_month_day const d{chr::year{to_int(m[6])}, chr::month{month_number(m[4].str())},
                                        chr::day{static_cast<unsigned>(to_int(m[5]))}};
            cover(d, d);
        }
        else if (m[7].matched) {
            chr::year_month const ym{chr::year{to_int(m[8])}, chr::month{month_number(m[7].str())}};
            cover(ym / chr::day{1}, chr::year_month_day{ym / chr::last});
        }
        else if (m[9].matched) {
            chr::year const y{to_int(m[9])};
            cover(y / chr::January / 1, y / chr::December / 31);
        }
        else if (m[10].matched) {
            cover(present_date, present_date);
        }
    }
    if (!first) {
        return std::nullopt;
    }
    return linking::CanonicalDateRange{chr::year_month_day{*first}, chr::year_month_day{*last}};
}

auto scripted_response(llm::ChatRequest const& request) -> std::string
{
    if (request.messages.size() < 2 || request.messages.front().role != llm::Role::system) {
        throw llm::LlmError(llm::LlmError::Kind::malformed, "scripted model expects a system and a user message");
    }
    auto const& role = request.messages.front().text;
    if (role == extraction::prompts::kExtractionRole) {
        return respond_extraction(request);
    }
    if (role == extraction::prompts::kPostprocessRole) {
        return respond_postprocess(request);
    }
    if (role == linking::prompts::kTemporalRole) {
        return respond_temporal(request);
    }
    if (role == evaluation::prompts::kStatementsRole) {
        return respond_statements(request);
    }
    if (role == evaluation::prompts::kVerdictsRole) {
        return respond_verdicts(request);
    }
    if (role == evaluation::prompts::kQuestionsRole) {
        return respond_questions(request);
    }
    throw llm::LlmError(llm::LlmError::Kind::malformed, "scripted model does not recognise this prompt");
}

}  // namespace metaharvest::offline
