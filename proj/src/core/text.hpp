#ifndef FTB_CORE_TEXT_HPP
#define FTB_CORE_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace ftb {

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);

// Canonical name form used for dedup: lowercase, trimmed, punctuation
// stripped, internal whitespace collapsed to single spaces.
std::string normalize_name(std::string_view name);

// Identifier slug: normalize_name with spaces replaced by '-'.
// "Web  Server!" -> "web-server". Collision handling is the caller's job.
std::string slugify(std::string_view name);

// Lowercase, split on non-alphanumeric bytes, drop empties.
std::vector<std::string> tokenize(std::string_view text);

// Uppercase the first letter of each whitespace-separated word.
std::string title_case(std::string_view text);

std::string first_line(std::string_view text);

}  // namespace ftb

#endif
