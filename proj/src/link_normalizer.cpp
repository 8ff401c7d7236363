#include "aegis/link_normalizer.hpp"

#include "aegis/errors.hpp"
#include "aegis/url.hpp"
#include "aegis/util.hpp"

#include <nlohmann/json.hpp>

#include <iostream>
#include <unordered_set>

namespace aegis::links {

const char* layout_name(Layout layout) {
    return layout == Layout::Flat ? "flat" : "tracked";
}

std::optional<Layout> layout_from_name(const std::string& name) {
    if (name == "flat") return Layout::Flat;
    if (name == "tracked") return Layout::Tracked;
    return std::nullopt;
}

std::vector<RawLink> discover_links(const std::string& html_text) {
    const auto doc = html::parse(html_text);
    std::vector<RawLink> out;
    html::for_each_element(*doc.root, [&](const html::Node& node) {
        if (node.tag != "a") return;
        RawLink link;
        link.href = node.attr("href");
        link.anchor_text = html::inner_text(node);
        link.dom_ordinal = static_cast<int>(out.size());
        out.push_back(std::move(link));
    });
    return out;
}

LayoutRegistry::LayoutRegistry() {
    registry_["ieee"] = Layout::Flat;
    registry_["neurips"] = Layout::Flat;
    registry_["acm"] = Layout::Tracked;
    registry_["acl"] = Layout::Tracked;
}

void LayoutRegistry::register_layout(const std::string& conference_id, Layout layout) {
    registry_[conference_id] = layout;
}

Layout LayoutRegistry::detect(const std::string& conference_id,
                              std::optional<Layout> override) const {
    if (override) return *override;
    const auto it = registry_.find(conference_id);
    if (it == registry_.end())
        throw UnknownConference("no layout registered for `" + conference_id +
                                "`; pass an explicit --layout override");
    return it->second;
}

std::regex compile_pattern(const std::string& pattern) {
    auto flags = std::regex::ECMAScript;
    std::string body = pattern;
    if (util::starts_with(body, "(?i)")) {
        flags |= std::regex::icase;
        body = body.substr(4);
    }
    return std::regex(body, flags);
}

namespace {

struct CompiledRules {
    std::vector<std::regex> includes;
    std::vector<std::regex> excludes;
};

CompiledRules compile_rules(const FilterRuleSet& rules) {
    if (rules.include_patterns.empty())
        throw ConfigError("rule set for `" + rules.publisher + "` has no include patterns");
    CompiledRules compiled;
    for (const auto& p : rules.include_patterns) compiled.includes.push_back(compile_pattern(p));
    for (const auto& p : rules.exclude_patterns) compiled.excludes.push_back(compile_pattern(p));
    return compiled;
}

bool matches_any(const std::vector<std::regex>& patterns, const std::string& text) {
    for (const auto& re : patterns)
        if (std::regex_search(text, re)) return true;
    return false;
}

// Shared resolution/filter/dedup tail of both strategies. Exclusion wins over
// inclusion; first occurrence wins on duplicates.
std::vector<PaperLink> normalize_links(
    const std::vector<std::pair<RawLink, std::optional<std::string>>>& raw,
    const FilterRuleSet& rules) {
    const CompiledRules compiled = compile_rules(rules);
    std::vector<PaperLink> out;
    std::unordered_set<std::string> seen;
    for (const auto& [link, track_label] : raw) {
        const std::string href = util::trim(link.href);
        if (href.empty() || href[0] == '#') continue;
        const auto resolved = url::resolve(rules.base_url, href);
        if (!resolved || !url::is_absolute_http(*resolved)) continue;
        if (!matches_any(compiled.includes, *resolved)) continue;
        if (matches_any(compiled.excludes, *resolved)) continue;
        if (!seen.insert(*resolved).second) continue;
        PaperLink paper;
        paper.absolute_url = *resolved;
        paper.publisher = rules.publisher;
        paper.track_label = track_label;
        paper.ordinal = static_cast<int>(out.size());
        out.push_back(std::move(paper));
    }
    if (out.empty())
        std::cerr << "warning: no links survived normalization for publisher `"
                  << rules.publisher << "`\n";
    return out;
}

void collect_anchors(const html::Node& node, int boundary_level, bool& stopped,
                     std::vector<const html::Node*>& anchors) {
    if (stopped) return;
    const int level = node.heading_level();
    if (level != 0 && level <= boundary_level) {
        stopped = true;
        return;
    }
    if (node.is_element("a")) anchors.push_back(&node);
    for (const auto& child : node.children) {
        collect_anchors(*child, boundary_level, stopped, anchors);
        if (stopped) return;
    }
}

}  // namespace

std::vector<PaperLink> normalize_flat(const std::vector<RawLink>& raw,
                                      const FilterRuleSet& rules) {
    std::vector<std::pair<RawLink, std::optional<std::string>>> tagged;
    tagged.reserve(raw.size());
    for (const auto& link : raw) tagged.emplace_back(link, std::nullopt);
    return normalize_links(tagged, rules);
}

std::vector<Track> extract_tracks(const std::string& html_text, const HeadingConfig& cfg) {
    const auto doc = html::parse(html_text);

    std::vector<const html::Node*> headings;
    html::for_each_element(*doc.root, [&](const html::Node& node) {
        const int level = node.heading_level();
        if (level == 0) return;
        for (int wanted : cfg.heading_levels)
            if (level == wanted) {
                headings.push_back(&node);
                return;
            }
    });

    int next_dom_ordinal = 0;
    std::vector<Track> tracks;
    for (size_t i = 0; i < headings.size(); ++i) {
        const html::Node* heading = headings[i];
        const int level = heading->heading_level();
        Track track;
        track.label = html::inner_text(*heading);
        track.heading_ordinal = static_cast<int>(i);

        // walk following siblings, descending into them, until a heading of
        // equal-or-higher level ends the section
        const html::Node* parent = heading->parent;
        if (parent != nullptr) {
            size_t child_index = 0;
            for (; child_index < parent->children.size(); ++child_index)
                if (parent->children[child_index].get() == heading) break;
            std::vector<const html::Node*> anchors;
            bool stopped = false;
            for (size_t s = child_index + 1; s < parent->children.size() && !stopped; ++s)
                collect_anchors(*parent->children[s], level, stopped, anchors);
            for (const html::Node* a : anchors) {
                RawLink link;
                link.href = a->attr("href");
                link.anchor_text = html::inner_text(*a);
                link.dom_ordinal = next_dom_ordinal++;
                track.links.push_back(std::move(link));
            }
        }
        if (track.label.empty()) continue;
        if (static_cast<int>(track.links.size()) < cfg.min_links_per_track) continue;
        tracks.push_back(std::move(track));
    }
    if (tracks.empty())
        throw NoTracksFound("no track headings with links found; the page may use a flat layout");
    return tracks;
}

std::vector<PaperLink> flatten_selected(const std::vector<Track>& tracks,
                                        const std::set<int>& selection,
                                        const FilterRuleSet& rules) {
    if (selection.empty()) throw EmptySelection("no tracks selected");
    std::set<int> available;
    for (const auto& track : tracks) available.insert(track.heading_ordinal);
    for (int ord : selection)
        if (!available.count(ord))
            throw ConfigError("selected track ordinal " + std::to_string(ord) +
                              " does not exist");

    std::vector<std::pair<RawLink, std::optional<std::string>>> tagged;
    for (const auto& track : tracks) {
        if (!selection.count(track.heading_ordinal)) continue;
        for (const auto& link : track.links) tagged.emplace_back(link, track.label);
    }
    return normalize_links(tagged, rules);
}

FilterRuleSet load_rules_file(const std::filesystem::path& path) {
    const auto j = nlohmann::json::parse(util::read_file(path));
    FilterRuleSet rules;
    rules.publisher = j.value("publisher", std::string());
    if (j.contains("base_url")) rules.base_url = j["base_url"].get<std::string>();
    if (!j.contains("include_patterns") || !j["include_patterns"].is_array() ||
        j["include_patterns"].empty())
        throw ConfigError(path.string() + ": include_patterns must be a non-empty array");
    rules.include_patterns = j["include_patterns"].get<std::vector<std::string>>();
    if (j.contains("exclude_patterns"))
        rules.exclude_patterns = j["exclude_patterns"].get<std::vector<std::string>>();
    if (j.contains("heading_levels"))
        rules.heading_levels = j["heading_levels"].get<std::vector<int>>();
    if (j.contains("layout")) {
        rules.layout = layout_from_name(j["layout"].get<std::string>());
        if (!rules.layout)
            throw ConfigError(path.string() + ": layout must be `flat` or `tracked`");
    }
    // fail fast on patterns that do not compile
    for (const auto& p : rules.include_patterns) compile_pattern(p);
    for (const auto& p : rules.exclude_patterns) compile_pattern(p);
    return rules;
}

}  // namespace aegis::links
