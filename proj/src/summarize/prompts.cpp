#include "summarize/prompts.hpp"

#include <cctype>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace ftb {

std::string render_exists_prompt(const std::vector<std::string>& library_names,
                                 const std::string& candidate_name,
                                 const std::string& candidate_description) {
    std::string library;
    for (std::size_t i = 0; i < library_names.size(); ++i) {
        if (i > 0) {
            library += "; ";
        }
        library += library_names[i];
    }
    std::string artifact = candidate_name;
    if (!candidate_description.empty()) {
        artifact += ": " + candidate_description;
    }
    std::string prompt;
    prompt += "Artifact Library T: {" + library + "}\n";
    prompt += "Artifact N: {" + artifact + "}\n";
    prompt += "Please judge if artifact N exists in Artifact Library T.\n";
    prompt += "A. Exists. B Not Exist";
    return prompt;
}

std::optional<bool> parse_exists_answer(const std::string& raw) {
    // The answer letter is the first alphabetic character, which must not be
    // followed by more letters ("A." yes, "Absolutely" no).
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\'' || c == '(' ||
            c == '*') {
            continue;
        }
        const bool next_is_letter =
            i + 1 < raw.size() && std::isalpha(static_cast<unsigned char>(raw[i + 1]));
        if ((c == 'A' || c == 'a') && !next_is_letter) {
            return true;
        }
        if ((c == 'B' || c == 'b') && !next_is_letter) {
            return false;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

std::string render_summarize_prompt(const std::vector<FeatureSummary>& children) {
    if (children.empty()) {
        raise(errc::empty_cluster, "cannot summarize an empty cluster");
    }
    std::string prompt;
    prompt +=
        "Based on the following sub-features, please generate a parent common feature that can "
        "cover these sub-features.\n";
    prompt += "The sub-features are: {";
    for (std::size_t i = 0; i < children.size(); ++i) {
        prompt += "\n- " + children[i].description;
    }
    prompt += "\n}\n";
    prompt +=
        "Please only output the common feature in the format of 'feature name: feature "
        "description:'.";
    return prompt;
}

namespace {

// Strips a leading "<label> :" (case-insensitive, optional inner spaces).
// The label only counts when its colon follows, so a name that merely starts
// with the label text is left alone.
std::string_view strip_labeled_prefix(std::string_view s, std::string_view label) {
    std::string_view t = s;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) {
        t.remove_prefix(1);
    }
    if (t.size() < label.size()) {
        return s;
    }
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(t[i])) != label[i]) {
            return s;
        }
    }
    t.remove_prefix(label.size());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) {
        t.remove_prefix(1);
    }
    if (t.empty() || t.front() != ':') {
        return s;
    }
    t.remove_prefix(1);
    return t;
}

}  // namespace

FeatureSummary parse_summary_response(const std::string& raw) {
    const std::string_view body = strip_labeled_prefix(raw, "feature name");
    const std::size_t colon = body.find(':');
    if (colon == std::string_view::npos) {
        raise(errc::malformed_summary, "summary response has no ':' delimiter");
    }
    std::string name = trim(std::string(body.substr(0, colon)));
    const std::string_view rest = strip_labeled_prefix(body.substr(colon + 1), "feature description");
    std::string description = trim(std::string(rest));
    // The requested format string ends with a stray colon; some responses echo it.
    if (!description.empty() && description.back() == ':') {
        description = trim(description.substr(0, description.size() - 1));
    }
    if (name.empty() || description.empty()) {
        raise(errc::malformed_summary, "summary response has an empty name or description");
    }
    if (name.find('\n') != std::string::npos) {
        raise(errc::malformed_summary, "summary name contains a newline");
    }
    return {std::move(name), std::move(description)};
}

}  // namespace ftb
