#pragma once

#include <string>
#include <string_view>

namespace metaharvest::ingest {

/// Visible text of an HTML document.
///
/// Bytes are decoded as lossy UTF-8. Content of script, style, noscript and
/// template elements is dropped, character references are decoded, and each
/// block-level element boundary starts a new line. Within a line whitespace
/// runs collapse to a single space; empty lines are removed. Malformed markup
/// is tolerated: anything that cannot be read as a tag is kept as text.
[[nodiscard]] auto extract_text(std::string_view html) -> std::string;

/// Decodes HTML character references (`&amp;`, `&#233;`, `&#xE9;`, ...).
/// Unknown references are kept verbatim.
[[nodiscard]] auto decode_html_entities(std::string_view text) -> std::string;

/// Escapes `&`, `<` and `>` so `text` can be embedded as HTML character data.
[[nodiscard]] auto escape_html(std::string_view text) -> std::string;

}  // namespace metaharvest::ingest
