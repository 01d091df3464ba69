#include "core/http.hpp"

#include <httplib.h>

#include <chrono>
#include <memory>

#include "core/errors.hpp"

namespace ftb {

namespace {

struct ParsedUrl {
    std::string scheme_host_port;  // e.g. "http://127.0.0.1:8080"
    std::string path;              // "/v1/embeddings" (includes query)
};

ParsedUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        raise(errc::invalid_argument, "not an http(s) url: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return ParsedUrl{url, "/"};
    }
    return ParsedUrl{url.substr(0, path_start), url.substr(path_start)};
}

void apply_timeout(httplib::Client& client, double timeout_s) {
    auto usec = std::chrono::microseconds(static_cast<long long>(timeout_s * 1e6));
    client.set_connection_timeout(usec);
    client.set_read_timeout(usec);
    client.set_write_timeout(usec);
}

HttpResult finish(const httplib::Result& res) {
    HttpResult out;
    if (res) {
        out.status = res->status;
        out.body = res->body;
        return out;
    }
    out.error = httplib::to_string(res.error());
    out.timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                    res.error() == httplib::Error::Read ||
                    res.error() == httplib::Error::Write;
    return out;
}

}  // namespace

HttpResult http_get(const std::string& url, double timeout_s) {
    ParsedUrl parsed = split_url(url);
    httplib::Client client(parsed.scheme_host_port);
    apply_timeout(client, timeout_s);
    client.set_follow_location(true);
    return finish(client.Get(parsed.path));
}

HttpResult http_post_json(const std::string& url, const HttpHeaders& headers,
                          const std::string& json_body, double timeout_s) {
    ParsedUrl parsed = split_url(url);
    httplib::Client client(parsed.scheme_host_port);
    apply_timeout(client, timeout_s);
    httplib::Headers hl;
    for (const auto& [key, value] : headers) {
        hl.emplace(key, value);
    }
    return finish(client.Post(parsed.path, hl, json_body, "application/json"));
}

}  // namespace ftb
