#ifndef FTB_INGEST_LIBRARY_BUILD_HPP
#define FTB_INGEST_LIBRARY_BUILD_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "ingest/artifact.hpp"
#include "ingest/judge.hpp"
#include "ingest/source.hpp"

namespace ftb {

struct SourceStatus {
    std::string source_name;
    bool ok = false;
    std::string error;          // empty when ok
    std::size_t parsed_count = 0;
};

struct BuildReport {
    ArtifactLibrary library;
    std::vector<SourceStatus> sources;

    bool all_ok() const;
    bool any_ok() const;
};

struct BuildOptions {
    double timeout_s = 30.0;
    int retries = 2;
    std::size_t jobs = 4;  // fetch concurrency; merging stays sequential
};

// Gradual expansion: each parsed entry either extends the provenance of the
// artifact the judge matched or appends a new artifact. Sources are fetched
// concurrently but merged strictly in list order, so ids are deterministic.
// A failing source is recorded and the build continues.
BuildReport build_library(const std::vector<RepoSource>& sources, const ExistsJudge& judge,
                          const BuildOptions& options = {});

// Sequential merge step shared by build_library and incremental use; returns
// the number of artifacts appended (as opposed to provenance-merged).
std::size_t merge_raw_artifacts(ArtifactLibrary& library, const std::vector<RawArtifact>& raws,
                                const std::string& source_name, const ExistsJudge& judge);

}  // namespace ftb

#endif
