#include "ingest/comps.hpp"

#include "core/errors.hpp"
#include "core/json.hpp"
#include "core/log.hpp"
#include "core/text.hpp"
#include "ingest/xml.hpp"

namespace ftb {

namespace {

bool has_lang_attribute(const XmlElement& element) {
    return element.attribute("xml:lang").has_value() || element.attribute("lang").has_value();
}

// The first <name>/<description> without a language attribute; translations
// carry xml:lang and are ignored.
std::string untranslated_text(const XmlElement& group, std::string_view element_name) {
    for (const XmlElement& child : group.children) {
        if (child.name == element_name && !has_lang_attribute(child)) {
            return trim(child.text);
        }
    }
    return "";
}

std::vector<RawArtifact> parse_comps(const std::string& bytes) {
    const XmlElement root = parse_xml(bytes);
    if (root.name != "comps") {
        raise(errc::malformed_metadata, "expected <comps> root, found <" + root.name + ">");
    }
    std::vector<RawArtifact> out;
    for (const XmlElement* group : root.find_children("group")) {
        const std::string name = untranslated_text(*group, "name");
        if (name.empty()) {
            log_warn("skipping group without a usable <name>");
            continue;
        }
        RawArtifact raw;
        raw.name = name;
        raw.description = untranslated_text(*group, "description");
        const XmlElement* id = group->find_child("id");
        raw.raw_id = id ? trim(id->text) : normalize_name(name);
        if (raw.description.empty()) {
            log_warn("group '" + name + "' has an empty description");
        }
        out.push_back(std::move(raw));
    }
    return out;
}

std::vector<RawArtifact> parse_library_json(const std::string& bytes) {
    json doc = json::parse(bytes, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("artifacts") ||
        !doc["artifacts"].is_array()) {
        raise(errc::malformed_metadata, "library json must be {\"artifacts\": [...]}");
    }
    std::vector<RawArtifact> out;
    for (const json& entry : doc["artifacts"]) {
        if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string()) {
            raise(errc::malformed_metadata, "library json artifact entry missing string name");
        }
        RawArtifact raw;
        raw.name = trim(entry["name"].get<std::string>());
        if (raw.name.empty()) {
            log_warn("skipping library entry with empty name");
            continue;
        }
        if (entry.contains("description") && entry["description"].is_string()) {
            raw.description = trim(entry["description"].get<std::string>());
        }
        raw.raw_id = entry.contains("id") && entry["id"].is_string()
                         ? entry["id"].get<std::string>()
                         : normalize_name(raw.name);
        if (raw.description.empty()) {
            log_warn("library entry '" + raw.name + "' has an empty description");
        }
        out.push_back(std::move(raw));
    }
    return out;
}

}  // namespace

std::string metadata_format_name(MetadataFormat format) {
    switch (format) {
        case MetadataFormat::comps_xml: return "comps_xml";
        case MetadataFormat::library_json: return "library_json";
    }
    return "?";
}

MetadataFormat metadata_format_from_name(const std::string& name) {
    if (name == "comps_xml") return MetadataFormat::comps_xml;
    if (name == "library_json") return MetadataFormat::library_json;
    raise(errc::unsupported_format, "unsupported metadata format: " + name);
}

std::vector<RawArtifact> parse_group_metadata(const std::string& bytes, MetadataFormat format) {
    switch (format) {
        case MetadataFormat::comps_xml: return parse_comps(bytes);
        case MetadataFormat::library_json: return parse_library_json(bytes);
    }
    raise(errc::unsupported_format, "unsupported metadata format");
}

}  // namespace ftb
