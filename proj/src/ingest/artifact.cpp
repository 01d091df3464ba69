#include "ingest/artifact.hpp"

#include <fstream>
#include <set>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace ftb {

const Artifact* ArtifactLibrary::by_id(const std::string& id) const {
    const auto it = id_index_.find(id);
    return it == id_index_.end() ? nullptr : &artifacts_[it->second];
}

std::optional<std::string> ArtifactLibrary::id_by_normalized_name(
    const std::string& raw_name) const {
    const auto it = name_index_.find(normalize_name(raw_name));
    if (it == name_index_.end()) {
        return std::nullopt;
    }
    return artifacts_[it->second].id;
}

const std::string& ArtifactLibrary::append(const RawArtifact& raw) {
    if (raw.name.empty()) {
        raise(errc::invalid_argument, "artifact name must be non-empty");
    }
    const std::string slug = slugify(raw.name);
    std::string id = slug.empty() ? "artifact" : slug;
    for (int suffix = 2; id_index_.count(id) != 0; ++suffix) {
        id = (slug.empty() ? "artifact" : slug) + "-" + std::to_string(suffix);
    }

    Artifact artifact;
    artifact.id = id;
    artifact.name = raw.name;
    artifact.description = raw.description;
    artifact.provenance.push_back({raw.source_name, raw.raw_id});

    const std::size_t pos = artifacts_.size();
    artifacts_.push_back(std::move(artifact));
    id_index_.emplace(artifacts_.back().id, pos);
    name_index_.emplace(normalize_name(raw.name), pos);  // earliest insertion kept
    return artifacts_.back().id;
}

void ArtifactLibrary::add_provenance(const std::string& id, const std::string& source,
                                     const std::string& raw_id) {
    const auto it = id_index_.find(id);
    if (it == id_index_.end()) {
        raise(errc::invalid_argument, "unknown artifact id: " + id);
    }
    std::vector<Provenance>& seen = artifacts_[it->second].provenance;
    for (const Provenance& p : seen) {
        if (p.source == source && p.raw_id == raw_id) {
            return;  // a repeat sighting is the same sighting; merging stays idempotent
        }
    }
    seen.push_back({source, raw_id});
}

json ArtifactLibrary::to_json() const {
    json doc;
    doc["artifacts"] = json::array();
    for (const Artifact& artifact : artifacts_) {
        json entry;
        entry["id"] = artifact.id;
        entry["name"] = artifact.name;
        entry["description"] = artifact.description;
        entry["provenance"] = json::array();
        for (const Provenance& p : artifact.provenance) {
            entry["provenance"].push_back(json{{"source", p.source}, {"raw_id", p.raw_id}});
        }
        doc["artifacts"].push_back(std::move(entry));
    }
    return doc;
}

ArtifactLibrary ArtifactLibrary::from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("artifacts") || !doc["artifacts"].is_array()) {
        raise(errc::schema, "library json must be an object with an 'artifacts' array");
    }
    ArtifactLibrary library;
    std::set<std::string> seen_ids;
    for (const json& entry : doc["artifacts"]) {
        for (const char* field : {"id", "name", "description"}) {
            if (!entry.contains(field) || !entry[field].is_string()) {
                raise(errc::schema, std::string("artifact entry missing string '") + field + "'");
            }
        }
        Artifact artifact;
        artifact.id = entry["id"].get<std::string>();
        artifact.name = entry["name"].get<std::string>();
        artifact.description = entry["description"].get<std::string>();
        if (artifact.id.empty() || artifact.name.empty()) {
            raise(errc::schema, "artifact id and name must be non-empty");
        }
        if (!seen_ids.insert(artifact.id).second) {
            raise(errc::schema, "duplicate artifact id: " + artifact.id);
        }
        if (!entry.contains("provenance") || !entry["provenance"].is_array() ||
            entry["provenance"].empty()) {
            raise(errc::schema, "artifact '" + artifact.id + "' provenance must be non-empty");
        }
        for (const json& p : entry["provenance"]) {
            if (!p.is_object() || !p.contains("source") || !p.contains("raw_id")) {
                raise(errc::schema, "provenance entries need 'source' and 'raw_id'");
            }
            artifact.provenance.push_back(
                {p["source"].get<std::string>(), p["raw_id"].get<std::string>()});
        }
        const std::size_t pos = library.artifacts_.size();
        library.artifacts_.push_back(std::move(artifact));
        library.id_index_.emplace(library.artifacts_.back().id, pos);
        library.name_index_.emplace(normalize_name(library.artifacts_.back().name), pos);
    }
    return library;
}

void ArtifactLibrary::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        raise(errc::io, "cannot write " + path);
    }
    out << to_json().dump(2) << '\n';
}

ArtifactLibrary ArtifactLibrary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(errc::io, "cannot read " + path);
    }
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        raise(errc::schema, "library file is not valid json: " + path);
    }
    return from_json(doc);
}

}  // namespace ftb
