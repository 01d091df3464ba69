#ifndef FTB_INGEST_COMPS_HPP
#define FTB_INGEST_COMPS_HPP

#include <string>
#include <vector>

#include "ingest/source.hpp"

namespace ftb {

// One RawArtifact per group/entry in document order. source_name on the
// results is left empty; callers stamp it. comps_xml reads the first <name>
// and <description> carrying no language attribute; groups without a usable
// name are skipped with a warning, empty descriptions are kept with a warning.
std::vector<RawArtifact> parse_group_metadata(const std::string& bytes, MetadataFormat format);

}  // namespace ftb

#endif
