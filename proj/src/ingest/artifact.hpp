#ifndef FTB_INGEST_ARTIFACT_HPP
#define FTB_INGEST_ARTIFACT_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/json.hpp"
#include "ingest/source.hpp"

namespace ftb {

struct Provenance {
    std::string source;
    std::string raw_id;
};

struct Artifact {
    std::string id;  // deterministic name slug, "-2"/"-3"... on collision
    std::string name;
    std::string description;
    std::vector<Provenance> provenance;  // non-empty
};

// Insertion-ordered, deduplicated collection. Lookups by id and by normalized
// name (earliest insertion wins); safe to share read-only once built.
class ArtifactLibrary {
public:
    const std::vector<Artifact>& artifacts() const { return artifacts_; }
    std::size_t size() const { return artifacts_.size(); }
    bool empty() const { return artifacts_.empty(); }

    const Artifact* by_id(const std::string& id) const;
    std::optional<std::string> id_by_normalized_name(const std::string& raw_name) const;

    // Appends a fresh artifact for this raw entry and returns its id.
    const std::string& append(const RawArtifact& raw);
    // Records one more (source, raw_id) sighting of an existing artifact.
    void add_provenance(const std::string& id, const std::string& source,
                        const std::string& raw_id);

    json to_json() const;
    // Validates ids, names, and provenance; raises errc::schema naming the
    // violated invariant.
    static ArtifactLibrary from_json(const json& doc);

    void save(const std::string& path) const;
    static ArtifactLibrary load(const std::string& path);

private:
    std::vector<Artifact> artifacts_;
    std::map<std::string, std::size_t> id_index_;
    std::map<std::string, std::size_t> name_index_;  // normalized name → earliest position
};

}  // namespace ftb

#endif
