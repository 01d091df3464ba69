#ifndef FTB_INGEST_FETCH_HPP
#define FTB_INGEST_FETCH_HPP

#include <string>

#include "ingest/source.hpp"

namespace ftb {

// file:// URLs and bare paths read the local file; http(s) URLs are fetched
// with `retries` extra attempts and exponential backoff on transient failures
// (network errors, timeouts, HTTP 5xx). Non-2xx statuses raise
// errc::http_status with the code in error::detail().
std::string fetch_metadata(const RepoSource& source, double timeout_s = 30.0, int retries = 2);

}  // namespace ftb

#endif
