#ifndef FTB_SUMMARIZE_PROMPTS_HPP
#define FTB_SUMMARIZE_PROMPTS_HPP

#include <optional>
#include <string>
#include <vector>

namespace ftb {

struct FeatureSummary {
    std::string name;         // non-empty, no newline
    std::string description;  // non-empty
};

// Membership question over the library: names the library contents, the
// candidate, and asks for an A/B answer.
std::string render_exists_prompt(const std::vector<std::string>& library_names,
                                 const std::string& candidate_name,
                                 const std::string& candidate_description);

// true = exists (A), false = does not (B), nullopt = unparseable.
std::optional<bool> parse_exists_answer(const std::string& raw);

// Parent-feature question over a cluster: lists the children's descriptions
// in order and asks for "feature name: feature description" output.
std::string render_summarize_prompt(const std::vector<FeatureSummary>& children);

// Splits on the first ':' after an optional leading "feature name" label;
// tolerates a "feature description:" label on the right-hand side and strips
// one trailing colon. Raises errc::malformed_summary when either half is
// empty or the name contains a newline.
FeatureSummary parse_summary_response(const std::string& raw);

}  // namespace ftb

#endif
