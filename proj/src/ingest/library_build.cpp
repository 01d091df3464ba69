#include "ingest/library_build.hpp"

#include "core/errors.hpp"
#include "core/log.hpp"
#include "core/parallel.hpp"
#include "ingest/comps.hpp"
#include "ingest/fetch.hpp"

namespace ftb {

bool BuildReport::all_ok() const {
    for (const SourceStatus& s : sources) {
        if (!s.ok) {
            return false;
        }
    }
    return true;
}

bool BuildReport::any_ok() const {
    for (const SourceStatus& s : sources) {
        if (s.ok) {
            return true;
        }
    }
    return false;
}

std::size_t merge_raw_artifacts(ArtifactLibrary& library, const std::vector<RawArtifact>& raws,
                                const std::string& source_name, const ExistsJudge& judge) {
    std::size_t appended = 0;
    for (const RawArtifact& raw : raws) {
        if (raw.name.empty()) {
            continue;  // parse layer warned already
        }
        RawArtifact stamped = raw;
        stamped.source_name = source_name;
        if (const auto matched = judge_exists(library, stamped, judge)) {
            library.add_provenance(*matched, source_name, stamped.raw_id);
        } else {
            library.append(stamped);
            ++appended;
        }
    }
    return appended;
}

BuildReport build_library(const std::vector<RepoSource>& sources, const ExistsJudge& judge,
                          const BuildOptions& options) {
    if (sources.empty()) {
        raise(errc::invalid_argument, "build_library: no sources given");
    }

    struct Fetched {
        std::string bytes;
        std::string error;
        bool ok = false;
    };
    std::vector<Fetched> fetched(sources.size());
    parallel_for_indexed(sources.size(), options.jobs, [&](std::size_t i) {
        try {
            fetched[i].bytes = fetch_metadata(sources[i], options.timeout_s, options.retries);
            fetched[i].ok = true;
        } catch (const error& e) {
            fetched[i].error = e.what();
        }
    });

    BuildReport report;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        SourceStatus status;
        status.source_name = sources[i].name;
        if (!fetched[i].ok) {
            status.error = fetched[i].error;
            log_error("source '" + sources[i].name + "' failed: " + status.error);
            report.sources.push_back(std::move(status));
            continue;
        }
        try {
            const std::vector<RawArtifact> raws =
                parse_group_metadata(fetched[i].bytes, sources[i].format);
            status.parsed_count = raws.size();
            merge_raw_artifacts(report.library, raws, sources[i].name, judge);
            status.ok = true;
        } catch (const error& e) {
            status.error = e.what();
            log_error("source '" + sources[i].name + "' failed: " + status.error);
        }
        report.sources.push_back(std::move(status));
    }
    return report;
}

}  // namespace ftb
