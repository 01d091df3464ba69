#ifndef FTB_INGEST_SOURCE_HPP
#define FTB_INGEST_SOURCE_HPP

#include <string>

namespace ftb {

enum class MetadataFormat { comps_xml, library_json };

std::string metadata_format_name(MetadataFormat format);
// Raises errc::unsupported_format for anything unknown.
MetadataFormat metadata_format_from_name(const std::string& name);

struct RepoSource {
    std::string name;
    std::string version;
    std::string metadata_url;  // http(s)://, file://, or a bare filesystem path
    MetadataFormat format = MetadataFormat::comps_xml;
};

// One group/entry as parsed from a source, before consolidation.
struct RawArtifact {
    std::string source_name;
    std::string raw_id;
    std::string name;         // non-empty
    std::string description;  // may be empty (warned about at parse time)
};

}  // namespace ftb

#endif
