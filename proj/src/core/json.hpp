#ifndef FTB_CORE_JSON_HPP
#define FTB_CORE_JSON_HPP

#include <json.hpp>

namespace ftb {

// All serialized artifacts use insertion-ordered keys so identical inputs
// produce byte-identical files.
using json = nlohmann::ordered_json;

}  // namespace ftb

#endif
