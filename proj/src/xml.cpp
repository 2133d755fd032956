#include "stsc/xml.hpp"

namespace stsc::xml {

const std::string* Element::attr(std::string_view name) const {
    for (const auto& [k, v] : attrs)
        if (k == name) return &v;
    return nullptr;
}

const Element* Element::child(std::string_view name) const {
    for (const auto& c : children)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

struct Parser {
    std::string_view in;
    size_t pos = 0;
    std::string error;
    size_t error_offset = 0;

    bool fail(const std::string& msg, size_t at) {
        if (error.empty()) {
            error = msg;
            error_offset = at;
        }
        return false;
    }

    bool eof() const { return pos >= in.size(); }
    char peek() const { return in[pos]; }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
    static bool is_name_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':';
    }
    static bool is_name_char(char c) {
        return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
    }

    void skip_space() {
        while (!eof() && is_space(peek())) ++pos;
    }

    bool skip_misc() {
        // Whitespace, comments, PIs, and the XML declaration between elements.
        for (;;) {
            skip_space();
            if (pos + 1 >= in.size() || in[pos] != '<') return true;
            if (in[pos + 1] == '?') {
                size_t end = in.find("?>", pos + 2);
                if (end == std::string_view::npos)
                    return fail("unterminated processing instruction", pos);
                pos = end + 2;
            } else if (in.compare(pos, 4, "<!--") == 0) {
                size_t end = in.find("-->", pos + 4);
                if (end == std::string_view::npos) return fail("unterminated comment", pos);
                pos = end + 3;
            } else {
                return true;
            }
        }
    }

    bool parse_name(std::string& out) {
        if (eof() || !is_name_start(peek())) return fail("expected name", pos);
        size_t start = pos;
        while (!eof() && is_name_char(peek())) ++pos;
        out.assign(in.substr(start, pos - start));
        return true;
    }

    bool decode_entity(std::string& out, size_t amp) {
        size_t semi = in.find(';', amp + 1);
        if (semi == std::string_view::npos || semi - amp > 12)
            return fail("malformed entity reference", amp);
        std::string_view ent = in.substr(amp + 1, semi - amp - 1);
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos") out.push_back('\'');
        else if (!ent.empty() && ent[0] == '#') {
            int base = 10;
            size_t i = 1;
            if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')) {
                base = 16;
                i = 2;
            }
            unsigned long cp = 0;
            if (i >= ent.size()) return fail("malformed character reference", amp);
            for (; i < ent.size(); ++i) {
                char c = ent[i];
                int d;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else if (base == 16 && c >= 'A' && c <= 'F') d = c - 'A' + 10;
                else return fail("malformed character reference", amp);
                cp = cp * static_cast<unsigned long>(base) + static_cast<unsigned long>(d);
                if (cp > 0x10FFFF) return fail("character reference out of range", amp);
            }
            // UTF-8 encode.
            if (cp < 0x80) out.push_back(static_cast<char>(cp));
            else if (cp < 0x800) {
                out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else if (cp < 0x10000) {
                out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else {
                out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            }
        } else {
            return fail("unknown entity: " + std::string(ent), amp);
        }
        pos = semi + 1;
        return true;
    }

    bool parse_attr_value(std::string& out) {
        if (eof() || (peek() != '"' && peek() != '\'')) return fail("expected quoted value", pos);
        char quote = peek();
        ++pos;
        while (!eof() && peek() != quote) {
            if (peek() == '&') {
                if (!decode_entity(out, pos)) return false;
            } else if (peek() == '<') {
                return fail("'<' in attribute value", pos);
            } else {
                out.push_back(peek());
                ++pos;
            }
        }
        if (eof()) return fail("unterminated attribute value", pos);
        ++pos;
        return true;
    }

    bool parse_element(Element& el) {
        el.offset = pos;
        if (eof() || peek() != '<') return fail("expected '<'", pos);
        ++pos;
        if (!parse_name(el.name)) return false;
        for (;;) {
            skip_space();
            if (eof()) return fail("unterminated start tag", el.offset);
            if (peek() == '/') {
                ++pos;
                if (eof() || peek() != '>') return fail("malformed empty-element tag", pos);
                ++pos;
                return true;
            }
            if (peek() == '>') {
                ++pos;
                break;
            }
            std::string name, value;
            if (!parse_name(name)) return false;
            skip_space();
            if (eof() || peek() != '=') return fail("expected '=' after attribute name", pos);
            ++pos;
            skip_space();
            if (!parse_attr_value(value)) return false;
            el.attrs.emplace_back(std::move(name), std::move(value));
        }
        // Content: text, children, comments, PIs until the matching end tag.
        for (;;) {
            if (eof()) return fail("missing end tag for <" + el.name + ">", el.offset);
            if (peek() == '<') {
                if (pos + 1 < in.size() && in[pos + 1] == '/') {
                    size_t close_at = pos;
                    pos += 2;
                    std::string name;
                    if (!parse_name(name)) return false;
                    skip_space();
                    if (eof() || peek() != '>') return fail("malformed end tag", close_at);
                    ++pos;
                    if (name != el.name)
                        return fail("mismatched end tag: expected </" + el.name + ">, got </" +
                                        name + ">",
                                    close_at);
                    return true;
                }
                if (in.compare(pos, 4, "<!--") == 0) {
                    size_t end = in.find("-->", pos + 4);
                    if (end == std::string_view::npos) return fail("unterminated comment", pos);
                    pos = end + 3;
                    continue;
                }
                if (pos + 1 < in.size() && in[pos + 1] == '?') {
                    size_t end = in.find("?>", pos + 2);
                    if (end == std::string_view::npos)
                        return fail("unterminated processing instruction", pos);
                    pos = end + 2;
                    continue;
                }
                Element child;
                if (!parse_element(child)) return false;
                el.children.push_back(std::move(child));
            } else if (peek() == '&') {
                if (!decode_entity(el.text, pos)) return false;
            } else {
                el.text.push_back(peek());
                ++pos;
            }
        }
    }
};

}  // namespace

ParseResult parse(std::string_view input) {
    Parser p;
    p.in = input;
    ParseResult result;
    if (!p.skip_misc()) {
        result.error = p.error;
        result.error_offset = p.error_offset;
        return result;
    }
    if (p.eof()) {
        result.error = "empty document";
        result.error_offset = 0;
        return result;
    }
    Element root;
    if (!p.parse_element(root)) {
        result.error = p.error;
        result.error_offset = p.error_offset;
        return result;
    }
    if (!p.skip_misc()) {
        result.error = p.error;
        result.error_offset = p.error_offset;
        return result;
    }
    if (!p.eof()) {
        result.error = "trailing content after document element";
        result.error_offset = p.pos;
        return result;
    }
    result.root = std::move(root);
    return result;
}

}  // namespace stsc::xml
