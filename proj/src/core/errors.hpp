#ifndef FTB_CORE_ERRORS_HPP
#define FTB_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ftb {

enum class errc {
    invalid_argument,
    io,
    malformed_metadata,
    unsupported_format,
    network,
    http_status,
    timeout,
    provider,
    dimension_mismatch,
    empty_corpus,
    invalid_k,
    invalid_range,
    incompatible,
    single_cluster,
    empty_cluster,
    malformed_summary,
    schema,
    unresolved_gold_id,
    internal,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_argument:   return "invalid_argument";
        case errc::io:                 return "io";
        case errc::malformed_metadata: return "malformed_metadata";
        case errc::unsupported_format: return "unsupported_format";
        case errc::network:            return "network";
        case errc::http_status:        return "http_status";
        case errc::timeout:            return "timeout";
        case errc::provider:           return "provider";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::empty_corpus:       return "empty_corpus";
        case errc::invalid_k:          return "invalid_k";
        case errc::invalid_range:      return "invalid_range";
        case errc::incompatible:       return "incompatible";
        case errc::single_cluster:     return "single_cluster";
        case errc::empty_cluster:      return "empty_cluster";
        case errc::malformed_summary:  return "malformed_summary";
        case errc::schema:             return "schema";
        case errc::unresolved_gold_id: return "unresolved_gold_id";
        case errc::internal:           return "internal";
    }
    return "unknown";
}

// Single exception type for the whole core. `detail` carries the HTTP status
// for errc::http_status and is 0 otherwise.
class error : public std::runtime_error {
public:
    error(errc code, std::string msg, int detail = 0)
        : std::runtime_error(std::move(msg)), code_(code), detail_(detail) {}

    errc code() const noexcept { return code_; }
    int detail() const noexcept { return detail_; }

private:
    errc code_;
    int detail_;
};

[[noreturn]] inline void raise(errc c, const std::string& msg, int detail = 0) {
    throw error(c, msg, detail);
}

}  // namespace ftb

#endif
