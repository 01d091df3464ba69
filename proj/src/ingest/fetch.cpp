#include "ingest/fetch.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "core/errors.hpp"
#include "core/http.hpp"
#include "core/log.hpp"

namespace ftb {

namespace {

std::string read_local_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(errc::io, "cannot read " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool is_http_url(const std::string& url) {
    return url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0;
}

}  // namespace

std::string fetch_metadata(const RepoSource& source, double timeout_s, int retries) {
    const std::string& url = source.metadata_url;
    if (url.empty()) {
        raise(errc::invalid_argument, "source '" + source.name + "' has an empty metadata_url");
    }
    if (url.rfind("file://", 0) == 0) {
        return read_local_file(url.substr(7));
    }
    if (!is_http_url(url)) {
        return read_local_file(url);
    }

    double backoff_s = 0.2;
    HttpResult last;
    for (int attempt = 0; attempt <= retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff_s));
            backoff_s *= 2.0;
        }
        last = http_get(url, timeout_s);
        if (last.error.empty() && last.status >= 200 && last.status < 300) {
            return last.body;
        }
        // 4xx is not transient; everything else earns a retry.
        if (last.error.empty() && last.status >= 400 && last.status < 500) {
            break;
        }
        log_warn("fetch attempt " + std::to_string(attempt + 1) + " for " + url + " failed: " +
                 (last.error.empty() ? "status " + std::to_string(last.status) : last.error));
    }
    if (!last.error.empty()) {
        if (last.timed_out) {
            raise(errc::timeout, "timeout fetching " + url);
        }
        raise(errc::network, "network error fetching " + url + ": " + last.error);
    }
    raise(errc::http_status, "HTTP " + std::to_string(last.status) + " fetching " + url,
          last.status);
}

}  // namespace ftb
