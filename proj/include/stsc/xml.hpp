#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stsc::xml {

// Minimal XML document model: enough for archived chat logs. No DTD, CDATA,
// or namespace handling; attribute and tag names are opaque tokens.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<Element> children;
    std::string text;    // concatenated character data directly under this element
    size_t offset = 0;   // byte offset of '<' that opened the element

    const std::string* attr(std::string_view name) const;
    const Element* child(std::string_view name) const;
};

struct ParseResult {
    std::optional<Element> root;
    std::string error;        // empty on success
    size_t error_offset = 0;  // byte offset of the failure
};

// Parses a complete document. Skips the XML declaration, processing
// instructions, and comments. Decodes the five predefined entities and
// numeric character references in text and attribute values.
ParseResult parse(std::string_view input);

}  // namespace stsc::xml
