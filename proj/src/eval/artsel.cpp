#include "eval/artsel.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "core/embedding.hpp"
#include "core/errors.hpp"
#include "core/log.hpp"
#include "core/text.hpp"
#include "metrics/tree_metrics.hpp"

namespace ftb {

std::vector<ArtSelSample> load_artsel(const std::string& path,
                                      const std::set<std::string>& valid_ids) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io, "cannot open: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const std::exception& e) {
        raise(errc::schema, "dataset: not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array())
        raise(errc::schema, "dataset: 'samples' must be an array");

    std::vector<ArtSelSample> samples;
    std::size_t index = 0;
    for (const json& item : doc["samples"]) {
        const std::string where = "sample " + std::to_string(index);
        if (!item.is_object())
            raise(errc::schema, "dataset: " + where + " must be an object");
        if (!item.contains("requirement") || !item["requirement"].is_string() ||
            trim(item["requirement"].get<std::string>()).empty())
            raise(errc::schema,
                  "dataset: " + where + ": 'requirement' must be a non-empty string");
        if (!item.contains("gold") || !item["gold"].is_array())
            raise(errc::schema, "dataset: " + where + ": 'gold' must be an array");

        ArtSelSample sample;
        sample.requirement = item["requirement"].get<std::string>();
        std::set<std::string> seen;
        for (const json& id : item["gold"]) {
            if (!id.is_string())
                raise(errc::schema,
                      "dataset: " + where + ": gold entries must be strings");
            const std::string gold_id = id.get<std::string>();
            if (!seen.insert(gold_id).second)
                raise(errc::schema,
                      "dataset: " + where + ": duplicate gold id '" + gold_id + "'");
            if (!valid_ids.count(gold_id))
                raise(errc::unresolved_gold_id,
                      "dataset: " + where + ": unknown artifact id '" + gold_id + "'");
            sample.gold.push_back(gold_id);
        }
        samples.push_back(std::move(sample));
        ++index;
    }
    return samples;
}

namespace {

// Cosine of every candidate text against the requirement under one shared
// TF-IDF fit, so scores are comparable across candidates.
std::vector<double> embedding_scores(const std::vector<std::string>& texts,
                                     const std::string& requirement) {
    std::vector<std::string> corpus = texts;
    corpus.push_back(requirement);
    EmbeddingMatrix X = tfidf_fit_transform(corpus);
    std::span<const double> req = X.row(X.rows() - 1);
    std::vector<double> scores;
    scores.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i)
        scores.push_back(cosine_similarity(X.row(i), req));
    return scores;
}

std::string render_choice_prompt(const std::string& requirement,
                                 const std::vector<const FeatureNode*>& options) {
    std::ostringstream out;
    out << "Requirement: " << requirement << "\n\nCandidate features:\n";
    for (std::size_t i = 0; i < options.size(); ++i)
        out << (i + 1) << ". " << options[i]->name << ": " << options[i]->description
            << "\n";
    out << "\nPlease choose the candidate that best matches the requirement. "
           "Output only its number.";
    return out.str();
}

// First integer token in [1, n], as an index.
std::optional<std::size_t> parse_choice(const std::string& response, std::size_t n) {
    std::size_t i = 0;
    while (i < response.size()) {
        if (std::isdigit(static_cast<unsigned char>(response[i]))) {
            std::size_t value = 0;
            while (i < response.size() &&
                   std::isdigit(static_cast<unsigned char>(response[i]))) {
                value = value * 10 + static_cast<std::size_t>(response[i] - '0');
                ++i;
            }
            if (value >= 1 && value <= n) return value - 1;
        } else {
            ++i;
        }
    }
    return std::nullopt;
}

struct GuideContext {
    GuideKind guide = GuideKind::embedding_mock;
    std::shared_ptr<ChatProvider> chat;
    int max_retries = 2;
    const std::map<std::string, double>* node_scores = nullptr;  // id -> cosine
};

std::vector<double> score_candidates(const GuideContext& ctx,
                                     const std::string& requirement,
                                     const std::vector<const FeatureNode*>& nodes) {
    std::vector<double> base;
    base.reserve(nodes.size());
    for (const FeatureNode* node : nodes) base.push_back(ctx.node_scores->at(node->id));
    if (ctx.guide == GuideKind::embedding_mock || nodes.size() < 2) return base;

    const std::string prompt = render_choice_prompt(requirement, nodes);
    for (int attempt = 0; attempt <= ctx.max_retries; ++attempt) {
        std::string response;
        try {
            response = ctx.chat->complete(prompt);
        } catch (const error&) {
            continue;
        }
        if (auto chosen = parse_choice(response, nodes.size())) {
            std::vector<double> scores(nodes.size(), 0.0);
            scores[*chosen] = 1.0;
            return scores;
        }
    }
    log_warn("guide: no usable choice from the provider; falling back to embedding scores");
    return base;
}

std::map<std::string, double> tree_node_scores(const FeatureTree& tree,
                                               const std::string& requirement) {
    std::vector<std::string> texts;
    texts.reserve(tree.nodes.size());
    for (const FeatureNode& node : tree.nodes) texts.push_back(node.description);
    std::vector<double> scores = embedding_scores(texts, requirement);
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
        out[tree.nodes[i].id] = scores[i];
    return out;
}

struct ReachedLeaf {
    std::string artifact_id;
    double score = 0.0;
};

std::vector<std::string> rank_leaves(std::vector<ReachedLeaf> reached) {
    std::sort(reached.begin(), reached.end(), [](const ReachedLeaf& a, const ReachedLeaf& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.artifact_id < b.artifact_id;
    });
    std::vector<std::string> ids;
    ids.reserve(reached.size());
    for (ReachedLeaf& leaf : reached) ids.push_back(std::move(leaf.artifact_id));
    return ids;
}

// Every leaf ranked by its own embedding score — the no-pruning ordering used
// by the whole-tree mode and as the remote whole-tree fallback.
std::vector<std::string> rank_all_leaves(const FeatureTree& tree,
                                         const std::map<std::string, double>& scores) {
    std::vector<ReachedLeaf> reached;
    for (const FeatureNode& node : tree.nodes)
        if (node.level == 0)
            reached.push_back({node.artifact_id, scores.at(node.id)});
    return rank_leaves(std::move(reached));
}

std::string render_whole_tree_prompt(const FeatureTree& tree,
                                     const std::string& requirement) {
    std::ostringstream out;
    out << "Requirement: " << requirement << "\n\nFeature tree:\n";
    const int top_level = tree.max_level();
    auto render = [&](auto&& self, const std::string& id) -> void {
        const FeatureNode* node = tree.by_id(id);
        if (!node) return;
        for (int i = 0; i < top_level - node->level; ++i) out << "  ";
        out << "- ";
        if (node->level == 0) out << "[" << node->artifact_id << "] ";
        out << node->name << ": " << first_line(node->description) << "\n";
        for (const std::string& child : node->children) self(self, child);
    };
    for (const std::string& id : tree.top_ids) render(render, id);
    out << "\nPlease list the ids in square brackets of the artifacts that best "
           "match the requirement, one per line, most relevant first.";
    return out.str();
}

std::vector<std::string> recommend_whole_tree(const std::string& requirement,
                                              const FeatureTree& tree,
                                              const GuideContext& ctx) {
    std::set<std::string> leaf_ids;
    for (const FeatureNode& node : tree.nodes)
        if (node.level == 0) leaf_ids.insert(node.artifact_id);

    const std::string prompt = render_whole_tree_prompt(tree, requirement);
    for (int attempt = 0; attempt <= ctx.max_retries; ++attempt) {
        std::string response;
        try {
            response = ctx.chat->complete(prompt);
        } catch (const error&) {
            continue;
        }
        // Exact-token matches only; substring matching would confuse ids that
        // prefix one another.
        std::vector<std::string> picked;
        std::set<std::string> seen;
        std::string token;
        auto flush = [&]() {
            if (!token.empty() && leaf_ids.count(token) && seen.insert(token).second)
                picked.push_back(token);
            token.clear();
        };
        for (char c : response) {
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                c == '.')
                token.push_back(c);
            else
                flush();
        }
        flush();
        if (!picked.empty()) {
            for (const std::string& id : rank_all_leaves(tree, *ctx.node_scores))
                if (seen.insert(id).second) picked.push_back(id);
            return picked;
        }
    }
    log_warn("guide: whole-tree prompt yielded no artifact ids; ranking by embedding");
    return rank_all_leaves(tree, *ctx.node_scores);
}

}  // namespace

std::vector<std::string> recommend_with_tree(const std::string& requirement,
                                             const FeatureTree& tree,
                                             const RecommendOptions& opts) {
    if (tree.nodes.empty() || tree.top_ids.empty())
        raise(errc::invalid_argument, "recommendation needs a non-empty tree");
    if (opts.beam < 1) raise(errc::invalid_argument, "beam must be >= 1");

    const std::map<std::string, double> node_scores = tree_node_scores(tree, requirement);
    GuideContext ctx;
    ctx.guide = opts.guide;
    ctx.node_scores = &node_scores;
    if (opts.guide == GuideKind::remote_llm) {
        ctx.chat = opts.chat ? opts.chat
                             : std::shared_ptr<ChatProvider>(
                                   make_http_chat_provider(opts.provider));
        ctx.max_retries = opts.provider.max_retries;
    }

    if (opts.mode == GuideMode::whole_tree) {
        if (opts.guide == GuideKind::remote_llm)
            return recommend_whole_tree(requirement, tree, ctx);
        return rank_all_leaves(tree, node_scores);
    }

    struct Path {
        const FeatureNode* node;
        double cumulative;
    };
    std::vector<Path> frontier;
    std::vector<ReachedLeaf> reached;

    std::vector<const FeatureNode*> tops;
    tops.reserve(tree.top_ids.size());
    for (const std::string& id : tree.top_ids) tops.push_back(tree.by_id(id));
    std::vector<double> top_scores = score_candidates(ctx, requirement, tops);
    for (std::size_t i = 0; i < tops.size(); ++i) {
        if (tops[i]->level == 0)
            reached.push_back({tops[i]->artifact_id, top_scores[i]});
        else
            frontier.push_back({tops[i], top_scores[i]});
    }

    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end(), [](const Path& a, const Path& b) {
            if (a.cumulative != b.cumulative) return a.cumulative > b.cumulative;
            return a.node->id < b.node->id;
        });
        if (frontier.size() > static_cast<std::size_t>(opts.beam))
            frontier.resize(static_cast<std::size_t>(opts.beam));

        std::vector<Path> next;
        for (const Path& path : frontier) {
            std::vector<const FeatureNode*> children;
            children.reserve(path.node->children.size());
            for (const std::string& id : path.node->children)
                children.push_back(tree.by_id(id));
            std::vector<double> scores = score_candidates(ctx, requirement, children);
            for (std::size_t j = 0; j < children.size(); ++j) {
                if (children[j]->level == 0)
                    reached.push_back({children[j]->artifact_id, scores[j]});
                else
                    next.push_back({children[j], path.cumulative + scores[j]});
            }
        }
        frontier = std::move(next);
    }
    return rank_leaves(std::move(reached));
}

std::vector<std::string> recommend_flat(const std::string& requirement,
                                        const ArtifactLibrary& library,
                                        const RecommendOptions& opts) {
    if (library.size() == 0)
        raise(errc::invalid_argument, "recommendation needs a non-empty library");

    std::vector<std::string> texts;
    texts.reserve(library.size());
    for (const Artifact& artifact : library.artifacts())
        texts.push_back(artifact.description);
    std::vector<double> scores = embedding_scores(texts, requirement);

    std::vector<ReachedLeaf> ranked;
    ranked.reserve(library.size());
    std::size_t i = 0;
    for (const Artifact& artifact : library.artifacts())
        ranked.push_back({artifact.id, scores[i++]});

    if (opts.guide == GuideKind::remote_llm && library.size() >= 2) {
        std::shared_ptr<ChatProvider> chat =
            opts.chat ? opts.chat
                      : std::shared_ptr<ChatProvider>(make_http_chat_provider(opts.provider));
        std::vector<FeatureNode> rows;  // reuse the choice prompt's shape
        rows.reserve(library.size());
        for (const Artifact& artifact : library.artifacts())
            rows.push_back({artifact.id, artifact.name, artifact.description, 0, {}, artifact.id});
        std::vector<const FeatureNode*> view;
        view.reserve(rows.size());
        for (const FeatureNode& row : rows) view.push_back(&row);
        const std::string prompt = render_choice_prompt(requirement, view);
        for (int attempt = 0; attempt <= opts.provider.max_retries; ++attempt) {
            std::string response;
            try {
                response = chat->complete(prompt);
            } catch (const error&) {
                continue;
            }
            if (auto chosen = parse_choice(response, view.size())) {
                ranked[*chosen].score = 2.0;  // above any cosine
                break;
            }
        }
    }

    std::vector<std::string> ids = rank_leaves(std::move(ranked));
    if (opts.top_n > 0 && ids.size() > static_cast<std::size_t>(opts.top_n))
        ids.resize(static_cast<std::size_t>(opts.top_n));
    return ids;
}

EvalReport evaluate(const std::vector<ArtSelSample>& dataset, const FeatureTree& tree,
                    const RecommendOptions& opts) {
    if (dataset.empty()) raise(errc::invalid_argument, "dataset is empty");

    EvalReport report;
    const auto start = std::chrono::steady_clock::now();
    double sum = 0.0;
    for (const ArtSelSample& sample : dataset) {
        std::vector<std::string> ranked =
            recommend_with_tree(sample.requirement, tree, opts);
        const std::size_t k = std::min(sample.gold.size(), ranked.size());
        SampleResult result;
        result.requirement = sample.requirement;
        result.gold = sample.gold;
        result.recommended.assign(ranked.begin(), ranked.begin() + k);
        result.precision = precision(
            std::set<std::string>(result.recommended.begin(), result.recommended.end()),
            std::set<std::string>(sample.gold.begin(), sample.gold.end()));
        sum += result.precision;
        report.samples.push_back(std::move(result));
    }
    report.mean_precision = sum / static_cast<double>(dataset.size());
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

json eval_report_json(const EvalReport& report) {
    json doc;
    doc["mean_precision"] = report.mean_precision;
    json samples = json::array();
    for (const SampleResult& sample : report.samples) {
        json item;
        item["requirement"] = sample.requirement;
        item["gold"] = sample.gold;
        item["recommended"] = sample.recommended;
        item["precision"] = sample.precision;
        samples.push_back(std::move(item));
    }
    doc["samples"] = std::move(samples);
    return doc;
}

}  // namespace ftb
