#include "core/text.hpp"

#include <cctype>

namespace ftb {

namespace {

bool is_alnum(unsigned char c) {
    return std::isalnum(c) != 0;
}

bool is_space(unsigned char c) {
    return std::isspace(c) != 0;
}

}  // namespace

std::string to_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(static_cast<unsigned char>(text[begin]))) {
        ++begin;
    }
    while (end > begin && is_space(static_cast<unsigned char>(text[end - 1]))) {
        --end;
    }
    return std::string(text.substr(begin, end - begin));
}

std::string normalize_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    bool pending_space = false;
    for (unsigned char c : name) {
        if (is_alnum(c)) {
            if (pending_space && !out.empty()) {
                out.push_back(' ');
            }
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            // Punctuation and whitespace both act as soft separators.
            pending_space = true;
        }
    }
    return out;
}

std::string slugify(std::string_view name) {
    std::string normalized = normalize_name(name);
    for (char& c : normalized) {
        if (c == ' ') {
            c = '-';
        }
    }
    return normalized;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (is_alnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::string title_case(std::string_view text) {
    std::string out(text);
    bool at_word_start = true;
    for (char& c : out) {
        unsigned char u = static_cast<unsigned char>(c);
        if (is_space(u)) {
            at_word_start = true;
        } else {
            if (at_word_start) {
                c = static_cast<char>(std::toupper(u));
            }
            at_word_start = false;
        }
    }
    return out;
}

std::string first_line(std::string_view text) {
    std::size_t pos = text.find('\n');
    if (pos == std::string_view::npos) {
        return std::string(text);
    }
    return std::string(text.substr(0, pos));
}

}  // namespace ftb
