#include "metaharvest/ingest/xml_text.hpp"

#include <vector>

#include "metaharvest/core/text.hpp"
#include "metaharvest/ingest/html_text.hpp"

namespace metaharvest::ingest {

XmlParseError::XmlParseError(std::string const& what, std::size_t offset)
    : Error("xml parse error at byte " + std::to_string(offset) + ": " + what), offset_(offset)
{
}

namespace {

auto is_name_start(char c) -> bool
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':'
        || (static_cast<unsigned char>(c) >= 0x80);
}

auto is_name_char(char c) -> bool
{
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

struct Frame {
    std::string name;
    std::string path;
    std::string text;
};

class Linearizer {
  public:
    explicit Linearizer(std::string_view s) : s_(s) {}

    auto run() -> std::string
    {
        if (s_.starts_with("\xEF\xBB\xBF")) {
            pos_ = 3;
        }
        while (pos_ < s_.size()) {
            if (s_[pos_] == '<') {
                markup();
            } else {
                character_data();
            }
        }
        while (!stack_.empty()) {
            close_top();
        }
        if (!saw_element_) {
            throw XmlParseError("no root element", 0);
        }
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
    auto skip_past(std::string_view terminator, std::size_t from, char const* what) -> std::size_t
    {
        auto const end = s_.find(terminator, from);
        if (end == std::string_view::npos) {
            throw XmlParseError(std::string("unterminated ") + what, pos_);
        }
        return end + terminator.size();
    }

    void markup()
    {
        auto const rest = s_.substr(pos_);
        if (rest.starts_with("<?")) {
            pos_ = skip_past("?>", pos_ + 2, "processing instruction");
        } else if (rest.starts_with("<!--")) {
            pos_ = skip_past("-->", pos_ + 4, "comment");
        } else if (rest.starts_with("<![CDATA[")) {
            auto const start = pos_ + 9;
            auto const end = skip_past("]]>", start, "CDATA section");
            if (!stack_.empty()) {
                stack_.back().text.append(s_.substr(start, end - 3 - start));
            }
            pos_ = end;
        } else if (rest.starts_with("<!")) {
            doctype();
        } else if (rest.starts_with("</")) {
            end_tag();
        } else if (rest.size() > 1 && is_name_start(rest[1])) {
            start_tag();
        } else {
            // stray '<': keep as text
            if (!stack_.empty()) {
                stack_.back().text.push_back('<');
            }
            ++pos_;
        }
    }

    void doctype()
    {
        int depth = 0;
        for (std::size_t i = pos_ + 2; i < s_.size(); ++i) {
            if (s_[i] == '[') {
                ++depth;
            } else if (s_[i] == ']') {
                --depth;
            } else if (s_[i] == '>' && depth <= 0) {
                pos_ = i + 1;
                return;
            }
        }
        throw XmlParseError("unterminated declaration", pos_);
    }

    auto read_name(std::size_t& i) -> std::string_view
    {
        auto const start = i;
        while (i < s_.size() && is_name_char(s_[i])) {
            ++i;
        }
        return s_.substr(start, i - start);
    }

    void skip_space(std::size_t& i)
    {
        while (i < s_.size() && is_space(s_[i])) {
            ++i;
        }
    }

    void start_tag()
    {
        auto const tag_start = pos_;
        std::size_t i = pos_ + 1;
        std::string const name(read_name(i));
        Frame frame;
        frame.name = name;
        frame.path = stack_.empty() ? name : stack_.back().path + "/" + name;
        std::vector<std::string> attr_lines;
        bool self_closing = false;
        while (true) {
            skip_space(i);
            if (i >= s_.size()) {
                throw XmlParseError("unterminated start tag <" + name + ">", tag_start);
            }
            if (s_[i] == '>') {
                ++i;
                break;
            }
            if (s_[i] == '/' && i + 1 < s_.size() && s_[i + 1] == '>') {
                i += 2;
                self_closing = true;
                break;
            }
            if (!is_name_start(s_[i])) {
                ++i;  // junk inside the tag
                continue;
            }
            std::string const attr(read_name(i));
            skip_space(i);
            std::string value;
            if (i < s_.size() && s_[i] == '=') {
                ++i;
                skip_space(i);
                if (i < s_.size() && (s_[i] == '"' || s_[i] == '\'')) {
                    char const quote = s_[i];
                    auto const end = s_.find(quote, i + 1);
                    if (end == std::string_view::npos) {
                        throw XmlParseError("unterminated attribute value in <" + name + ">", tag_start);
                    }
                    value = s_.substr(i + 1, end - i - 1);
                    i = end + 1;
                } else {
                    auto const start = i;
                    while (i < s_.size() && !is_space(s_[i]) && s_[i] != '>' && s_[i] != '/') {
                        ++i;
                    }
                    value = s_.substr(start, i - start);
                }
            }
            if (attr == "xmlns" || attr.starts_with("xmlns:")) {
                continue;
            }
            auto const text = collapse_whitespace(decode_html_entities(value));
            if (!text.empty()) {
                attr_lines.push_back(frame.path + "/@" + attr + ": " + text);
            }
        }
        pos_ = i;
        saw_element_ = true;
        for (auto& line : attr_lines) {
            lines_.push_back(std::move(line));
        }
        stack_.push_back(std::move(frame));
        if (self_closing) {
            close_top();
        }
    }

    void end_tag()
    {
        auto const tag_start = pos_;
        std::size_t i = pos_ + 2;
        std::string const name(read_name(i));
        auto const end = s_.find('>', i);
        if (end == std::string_view::npos) {
            throw XmlParseError("unterminated end tag </" + name + ">", tag_start);
        }
        pos_ = end + 1;
        for (std::size_t k = stack_.size(); k-- > 0;) {
            if (stack_[k].name == name) {
                while (stack_.size() > k) {
                    close_top();
                }
                return;
            }
        }
        // stray end tag: ignored
    }

    void character_data()
    {
        auto end = s_.find('<', pos_);
        if (end == std::string_view::npos) {
            end = s_.size();
        }
        if (!stack_.empty()) {
            stack_.back().text += decode_html_entities(s_.substr(pos_, end - pos_));
        }
        pos_ = end;
    }

    void close_top()
    {
        Frame frame = std::move(stack_.back());
        stack_.pop_back();
        auto const text = collapse_whitespace(frame.text);
        if (!text.empty()) {
            lines_.push_back(frame.path + ": " + text);
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::vector<Frame> stack_;
    std::vector<std::string> lines_;
    bool saw_element_ = false;
};

}  // namespace

auto parse_structured_metadata(std::string_view xml) -> std::string
{
    // offsets refer to the raw input, so decoding happens on the output
    return sanitize_utf8(Linearizer(xml).run());
}

}  // namespace metaharvest::ingest
