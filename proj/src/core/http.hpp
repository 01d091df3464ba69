#ifndef FTB_CORE_HTTP_HPP
#define FTB_CORE_HTTP_HPP

#include <string>
#include <utility>
#include <vector>

namespace ftb {

struct HttpResult {
    int status = 0;              // 0 when no response was received
    std::string body;
    std::string error;           // transport error description, empty on success
    bool timed_out = false;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

// Thin wrappers over the bundled HTTP client, kept in one translation unit.
// `url` must be http:// or https://.
HttpResult http_get(const std::string& url, double timeout_s);
HttpResult http_post_json(const std::string& url, const HttpHeaders& headers,
                          const std::string& json_body, double timeout_s);

}  // namespace ftb

#endif
