#include "metaharvest/ingest/html_text.hpp"

#include <array>
#include <unordered_map>
#include <vector>

#include "metaharvest/core/text.hpp"

namespace metaharvest::ingest {

namespace {

constexpr std::array kBlockElements = {
    "address", "article", "aside",  "blockquote", "body",   "br",      "caption", "center",
    "dd",      "details", "dialog", "dir",        "div",    "dl",      "dt",      "fieldset",
    "figcaption", "figure", "footer", "form",     "frameset", "h1",    "h2",      "h3",
    "h4",      "h5",      "h6",     "head",       "header", "hgroup",  "hr",      "html",
    "legend",  "li",      "main",   "menu",       "nav",    "noframes", "ol",     "option",
    "p",       "pre",     "section", "summary",   "table",  "tbody",   "td",      "tfoot",
    "th",      "thead",   "title",  "tr",         "ul",
};

constexpr std::array kSkippedElements = {"script", "style", "noscript", "template"};

template <std::size_t N>
auto contains(std::array<const char*, N> const& set, std::string_view name) -> bool
{
    for (auto const* item : set) {
        if (name == item) {
            return true;
        }
    }
    return false;
}

auto is_name_char(char c) -> bool
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-'
        || c == ':' || c == '_';
}

auto is_alpha(char c) -> bool { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

auto named_entities() -> std::unordered_map<std::string_view, char32_t> const&
{
    static const std::unordered_map<std::string_view, char32_t> table = {
        {"amp", U'&'},       {"lt", U'<'},        {"gt", U'>'},        {"quot", U'"'},
        {"apos", U'\''},     {"nbsp", U' '},      {"copy", 0xA9},      {"reg", 0xAE},
        {"trade", 0x2122},   {"ndash", 0x2013},   {"mdash", 0x2014},   {"hellip", 0x2026},
        {"laquo", 0xAB},     {"raquo", 0xBB},     {"lsquo", 0x2018},   {"rsquo", 0x2019},
        {"ldquo", 0x201C},   {"rdquo", 0x201D},   {"bull", 0x2022},    {"middot", 0xB7},
        {"deg", 0xB0},       {"times", 0xD7},     {"euro", 0x20AC},    {"pound", 0xA3},
        {"sect", 0xA7},      {"para", 0xB6},      {"shy", 0xAD},       {"eacute", 0xE9},
        {"egrave", 0xE8},    {"euml", 0xEB},      {"aacute", 0xE1},    {"agrave", 0xE0},
        {"auml", 0xE4},      {"ouml", 0xF6},      {"uuml", 0xFC},      {"iuml", 0xEF},
        {"ccedil", 0xE7},    {"szlig", 0xDF},     {"oacute", 0xF3},    {"iacute", 0xED},
        {"uacute", 0xFA},    {"ntilde", 0xF1},    {"micro", 0xB5},     {"plusmn", 0xB1},
        {"frac12", 0xBD},    {"sup2", 0xB2},      {"larr", 0x2190},    {"rarr", 0x2192},
    };
    return table;
}

// Accumulates text into lines; whitespace runs collapse, block boundaries break lines.
class LineBuilder {
  public:
    void text(std::string_view s)
    {
        for (char c : s) {
            if (is_space(c)) {
                pending_space_ = !line_.empty();
            } else {
                if (pending_space_) {
                    line_.push_back(' ');
                    pending_space_ = false;
                }
                line_.push_back(c);
            }
        }
    }

    void block_break()
    {
        if (!line_.empty()) {
            lines_.push_back(std::move(line_));
            line_.clear();
        }
        pending_space_ = false;
    }

    auto finish() -> std::string
    {
        block_break();
        std::string out;
        for (std::size_t i = 0; i < lines_.size(); ++i) {
            if (i != 0) {
                out.push_back('\n');
            }
            out += lines_[i];
        }
        return out;
    }

  private:
    std::string line_;
    std::vector<std::string> lines_;
    bool pending_space_ = false;
};

// Position just past the '>' closing a tag that starts at `pos`, honouring quoted
// attribute values. npos when the tag never closes.
auto find_tag_end(std::string_view s, std::size_t pos) -> std::size_t
{
    char quote = 0;
    for (std::size_t i = pos; i < s.size(); ++i) {
        char const c = s[i];
        if (quote != 0) {
            if (c == quote) {
                quote = 0;
            }
        } else if (c == '"' || c == '\'') {
            // only attribute values open quotes, i.e. right after '='
            std::size_t k = i;
            while (k > pos && is_space(s[k - 1])) {
                --k;
            }
            if (k > pos && s[k - 1] == '=') {
                quote = c;
            }
        } else if (c == '>') {
            return i + 1;
        }
    }
    return std::string_view::npos;
}

auto ifind(std::string_view haystack, std::string_view needle, std::size_t from) -> std::size_t
{
    if (needle.size() > haystack.size()) {
        return std::string_view::npos;
    }
    for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
        if (iequals(haystack.substr(i, needle.size()), needle)) {
            return i;
        }
    }
    return std::string_view::npos;
}

}  // namespace

auto decode_html_entities(std::string_view text) -> std::string
{
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        char const c = text[i];
        if (c != '&') {
            out.push_back(c);
            ++i;
            continue;
        }
        auto const semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 32) {
            out.push_back(c);
            ++i;
            continue;
        }
        auto const body = text.substr(i + 1, semi - i - 1);
        bool decoded = false;
        if (body.size() >= 2 && body[0] == '#') {
            bool const hex = body[1] == 'x' || body[1] == 'X';
            auto const digits = body.substr(hex ? 2 : 1);
            char32_t cp = 0;
            bool valid = !digits.empty() && digits.size() <= 8;
            for (char d : digits) {
                int v = -1;
                if (d >= '0' && d <= '9') {
                    v = d - '0';
                } else if (hex && d >= 'a' && d <= 'f') {
                    v = d - 'a' + 10;
                } else if (hex && d >= 'A' && d <= 'F') {
                    v = d - 'A' + 10;
                }
                if (v < 0) {
                    valid = false;
                    break;
                }
                cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
            }
            if (valid) {
                append_utf8(out, cp == 0 ? char32_t{0xFFFD} : cp);
                decoded = true;
            }
        } else {
            auto const& table = named_entities();
            if (auto it = table.find(body); it != table.end()) {
                append_utf8(out, it->second);
                decoded = true;
            }
        }
        if (decoded) {
            i = semi + 1;
        } else {
            out.push_back(c);
            ++i;
        }
    }
    return out;
}

auto escape_html(std::string_view text) -> std::string
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

auto extract_text(std::string_view html) -> std::string
{
    std::string const doc = sanitize_utf8(html);
    std::string_view const s = doc;
    LineBuilder builder;
    std::size_t text_start = 0;
    std::size_t i = 0;

    auto flush_text = [&](std::size_t end) {
        if (end > text_start) {
            builder.text(decode_html_entities(s.substr(text_start, end - text_start)));
        }
    };

    while (i < s.size()) {
        if (s[i] != '<') {
            ++i;
            continue;
        }
        auto const rest = s.substr(i);
        if (rest.starts_with("<!--")) {
            flush_text(i);
            auto const end = s.find("-->", i + 4);
            i = end == std::string_view::npos ? s.size() : end + 3;
            text_start = i;
            continue;
        }
        if (rest.starts_with("<!") || rest.starts_with("<?")) {
            flush_text(i);
            auto const end = s.find('>', i + 2);
            i = end == std::string_view::npos ? s.size() : end + 1;
            text_start = i;
            continue;
        }
        bool const closing = rest.starts_with("</");
        std::size_t name_start = i + (closing ? 2 : 1);
        if (name_start >= s.size() || !is_alpha(s[name_start])) {
            ++i;  // literal '<'
            continue;
        }
        std::size_t name_end = name_start;
        while (name_end < s.size() && is_name_char(s[name_end])) {
            ++name_end;
        }
        auto const tag_end = find_tag_end(s, name_end);
        if (tag_end == std::string_view::npos) {
            ++i;  // unterminated tag: treat '<' as text
            continue;
        }
        flush_text(i);
        std::string const name = to_lower_ascii(s.substr(name_start, name_end - name_start));
        bool const self_closing = s[tag_end - 2] == '/';
        i = tag_end;
        if (!closing && !self_closing && contains(kSkippedElements, name)) {
            auto const close = ifind(s, "</" + name, i);
            if (close == std::string_view::npos) {
                i = s.size();
            } else {
                auto const end = s.find('>', close);
                i = end == std::string_view::npos ? s.size() : end + 1;
            }
        }
        if (contains(kBlockElements, name)) {
            builder.block_break();
        }
        text_start = i;
    }
    flush_text(s.size());
    return builder.finish();
}

}  // namespace metaharvest::ingest
