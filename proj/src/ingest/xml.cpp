#include "ingest/xml.hpp"

#include <cctype>
#include <string>

#include "core/errors.hpp"

namespace ftb {

namespace {

class Parser {
public:
    explicit Parser(std::string_view input) : in_(input) {}

    XmlElement parse_document() {
        skip_misc();
        if (eof() || peek() != '<') {
            fail("expected root element");
        }
        XmlElement root = parse_element();
        skip_misc();
        if (!eof()) {
            fail("trailing content after root element");
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        raise(errc::malformed_metadata,
              "xml error at offset " + std::to_string(pos_) + ": " + what);
    }

    bool eof() const { return pos_ >= in_.size(); }
    char peek() const { return in_[pos_]; }
    bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

    void skip_whitespace() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
    }

    // Whitespace, comments, PIs, and DOCTYPE between markup.
    void skip_misc() {
        while (true) {
            skip_whitespace();
            if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_comment() {
        pos_ += 4;
        const std::size_t end = in_.find("-->", pos_);
        if (end == std::string_view::npos) {
            fail("unterminated comment");
        }
        pos_ = end + 3;
    }

    void skip_until(std::string_view terminator) {
        const std::size_t end = in_.find(terminator, pos_);
        if (end == std::string_view::npos) {
            fail("unterminated markup");
        }
        pos_ = end + terminator.size();
    }

    void skip_doctype() {
        // Tolerate an internal subset: scan for the '>' balancing any '[...]'.
        int bracket_depth = 0;
        while (!eof()) {
            const char c = in_[pos_++];
            if (c == '[') {
                ++bracket_depth;
            } else if (c == ']') {
                --bracket_depth;
            } else if (c == '>' && bracket_depth <= 0) {
                return;
            }
        }
        fail("unterminated DOCTYPE");
    }

    static bool is_name_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
    }
    static bool is_name_char(char c) {
        return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
               c == '.';
    }

    std::string parse_name() {
        if (eof() || !is_name_start(peek())) {
            fail("expected a name");
        }
        const std::size_t start = pos_;
        while (!eof() && is_name_char(peek())) {
            ++pos_;
        }
        return std::string(in_.substr(start, pos_ - start));
    }

    std::string decode_entities(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size();) {
            if (raw[i] != '&') {
                out += raw[i++];
                continue;
            }
            const std::size_t semi = raw.find(';', i + 1);
            if (semi == std::string_view::npos) {
                fail("unterminated entity reference");
            }
            const std::string_view entity = raw.substr(i + 1, semi - i - 1);
            if (entity == "lt") {
                out += '<';
            } else if (entity == "gt") {
                out += '>';
            } else if (entity == "amp") {
                out += '&';
            } else if (entity == "apos") {
                out += '\'';
            } else if (entity == "quot") {
                out += '"';
            } else if (!entity.empty() && entity[0] == '#') {
                out += decode_char_ref(entity.substr(1));
            } else {
                fail("unknown entity &" + std::string(entity) + ";");
            }
            i = semi + 1;
        }
        return out;
    }

    std::string decode_char_ref(std::string_view digits) {
        int base = 10;
        if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
            base = 16;
            digits.remove_prefix(1);
        }
        if (digits.empty()) {
            fail("empty character reference");
        }
        unsigned long code = 0;
        for (char c : digits) {
            int digit;
            if (c >= '0' && c <= '9') {
                digit = c - '0';
            } else if (base == 16 && c >= 'a' && c <= 'f') {
                digit = c - 'a' + 10;
            } else if (base == 16 && c >= 'A' && c <= 'F') {
                digit = c - 'A' + 10;
            } else {
                fail("bad character reference");
            }
            code = code * static_cast<unsigned long>(base) + static_cast<unsigned long>(digit);
            if (code > 0x10FFFF) {
                fail("character reference out of range");
            }
        }
        // Encode the code point as UTF-8.
        std::string out;
        if (code < 0x80) {
            out += static_cast<char>(code);
        } else if (code < 0x800) {
            out += static_cast<char>(0xC0 | (code >> 6));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else if (code < 0x10000) {
            out += static_cast<char>(0xE0 | (code >> 12));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (code >> 18));
            out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        }
        return out;
    }

    void parse_attributes(XmlElement& element) {
        while (true) {
            skip_whitespace();
            if (eof()) {
                fail("unterminated start tag");
            }
            if (peek() == '>' || peek() == '/') {
                return;
            }
            std::string name = parse_name();
            skip_whitespace();
            if (eof() || peek() != '=') {
                fail("expected '=' after attribute name");
            }
            ++pos_;
            skip_whitespace();
            if (eof() || (peek() != '"' && peek() != '\'')) {
                fail("expected quoted attribute value");
            }
            const char quote = in_[pos_++];
            const std::size_t start = pos_;
            while (!eof() && peek() != quote) {
                ++pos_;
            }
            if (eof()) {
                fail("unterminated attribute value");
            }
            element.attributes.emplace_back(std::move(name),
                                            decode_entities(in_.substr(start, pos_ - start)));
            ++pos_;
        }
    }

    XmlElement parse_element() {
        ++pos_;  // consume '<'
        XmlElement element;
        element.name = parse_name();
        parse_attributes(element);
        if (peek() == '/') {
            ++pos_;
            if (eof() || peek() != '>') {
                fail("malformed self-closing tag");
            }
            ++pos_;
            return element;
        }
        ++pos_;  // consume '>'

        while (true) {
            if (eof()) {
                fail("unterminated element <" + element.name + ">");
            }
            if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<![CDATA[")) {
                pos_ += 9;
                const std::size_t end = in_.find("]]>", pos_);
                if (end == std::string_view::npos) {
                    fail("unterminated CDATA section");
                }
                element.text.append(in_.substr(pos_, end - pos_));
                pos_ = end + 3;
            } else if (starts_with("</")) {
                pos_ += 2;
                const std::string closing = parse_name();
                if (closing != element.name) {
                    fail("mismatched closing tag </" + closing + "> for <" + element.name + ">");
                }
                skip_whitespace();
                if (eof() || peek() != '>') {
                    fail("malformed closing tag");
                }
                ++pos_;
                return element;
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (peek() == '<') {
                element.children.push_back(parse_element());
            } else {
                const std::size_t start = pos_;
                while (!eof() && peek() != '<') {
                    ++pos_;
                }
                element.text.append(decode_entities(in_.substr(start, pos_ - start)));
            }
        }
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

}  // namespace

const XmlElement* XmlElement::find_child(std::string_view child_name) const {
    for (const XmlElement& child : children) {
        if (child.name == child_name) {
            return &child;
        }
    }
    return nullptr;
}

std::vector<const XmlElement*> XmlElement::find_children(std::string_view child_name) const {
    std::vector<const XmlElement*> out;
    for (const XmlElement& child : children) {
        if (child.name == child_name) {
            out.push_back(&child);
        }
    }
    return out;
}

std::optional<std::string_view> XmlElement::attribute(std::string_view attr_name) const {
    for (const auto& [name, value] : attributes) {
        if (name == attr_name) {
            return std::string_view(value);
        }
    }
    return std::nullopt;
}

XmlElement parse_xml(std::string_view input) {
    // Strip a UTF-8 BOM if present.
    if (input.size() >= 3 && input.substr(0, 3) == "\xEF\xBB\xBF") {
        input.remove_prefix(3);
    }
    return Parser(input).parse_document();
}

}  // namespace ftb
