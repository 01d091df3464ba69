#ifndef FTB_CORE_SHA256_HPP
#define FTB_CORE_SHA256_HPP

#include <string>
#include <string_view>

namespace ftb {

// Lowercase hex digest.
std::string sha256_hex(std::string_view data);

}  // namespace ftb

#endif
