#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "metaharvest/core/error.hpp"

namespace metaharvest::ingest {

/// Raised when an XML document cannot be recovered. `offset()` is the byte
/// position where the offending construct starts.
class XmlParseError : public Error {
  public:
    XmlParseError(std::string const& what, std::size_t offset);
    [[nodiscard]] auto offset() const noexcept -> std::size_t { return offset_; }

  private:
    std::size_t offset_;
};

/// Linearizes an XML document into "element-path: text" lines.
///
/// One line is emitted per element carrying non-whitespace character data
/// (whitespace collapsed), in document order; the path is the slash-joined
/// chain of qualified element names from the root. Attributes other than
/// namespace declarations become "element-path/@name: value" lines. Entity
/// references and CDATA sections are decoded.
///
/// Recoverable defects are repaired: unclosed elements are closed at end of
/// input, mismatched end tags close back to the matching open element (or are
/// ignored), and stray '<' characters are kept as text. Unterminated markup
/// (tags, comments, CDATA, processing instructions) and documents without any
/// element throw XmlParseError.
[[nodiscard]] auto parse_structured_metadata(std::string_view xml) -> std::string;

}  // namespace metaharvest::ingest
