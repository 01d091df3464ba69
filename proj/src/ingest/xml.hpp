#ifndef FTB_INGEST_XML_HPP
#define FTB_INGEST_XML_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ftb {

// Minimal XML subset: elements, attributes, character data, CDATA, comments,
// processing instructions and DOCTYPE (both skipped), and the five named
// entities plus numeric character references. Enough for package-group
// metadata; not a general XML processor (no namespaces, no DTD expansion).
struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<XmlElement> children;
    std::string text;  // concatenated character data directly inside this element

    const XmlElement* find_child(std::string_view child_name) const;
    std::vector<const XmlElement*> find_children(std::string_view child_name) const;
    std::optional<std::string_view> attribute(std::string_view attr_name) const;
};

// Parses a complete document and returns its root element.
// Raises errc::malformed_metadata on any syntax error.
XmlElement parse_xml(std::string_view input);

}  // namespace ftb

#endif
