#pragma once

#include "aegis/html.hpp"

#include <filesystem>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

namespace aegis::links {

enum class Layout { Flat, Tracked };

const char* layout_name(Layout layout);
std::optional<Layout> layout_from_name(const std::string& name);

struct RawLink {
    std::string href;         // as authored: may be relative, empty, or a fragment
    std::string anchor_text;
    int dom_ordinal = 0;      // position in document order
};

struct FilterRuleSet {
    std::string publisher;
    std::vector<std::string> include_patterns;
    std::vector<std::string> exclude_patterns;
    std::string base_url;  // absolute; used for resolving relative hrefs
    std::vector<int> heading_levels = {2, 3, 4};
    std::optional<Layout> layout;
};

struct Track {
    std::string label;
    int heading_ordinal = 0;  // position among detected candidate headings
    std::vector<RawLink> links;
};

struct PaperLink {
    std::string absolute_url;
    std::string publisher;
    std::optional<std::string> track_label;
    int ordinal = 0;
};

struct HeadingConfig {
    std::vector<int> heading_levels = {2, 3, 4};
    int min_links_per_track = 1;
};

// Every anchor's href in document order, unfiltered: duplicates, fragments
// and relative paths included.
std::vector<RawLink> discover_links(const std::string& html_text);

// Registry lookup with optional override. Built-ins: ieee/neurips -> flat,
// acm/acl -> tracked; a rules file with a `layout` field extends the
// registry. Throws UnknownConference otherwise.
class LayoutRegistry {
public:
    LayoutRegistry();
    void register_layout(const std::string& conference_id, Layout layout);
    Layout detect(const std::string& conference_id,
                  std::optional<Layout> override = std::nullopt) const;

private:
    std::map<std::string, Layout> registry_;
};

std::vector<PaperLink> normalize_flat(const std::vector<RawLink>& raw,
                                      const FilterRuleSet& rules);

std::vector<Track> extract_tracks(const std::string& html_text, const HeadingConfig& cfg);

std::vector<PaperLink> flatten_selected(const std::vector<Track>& tracks,
                                        const std::set<int>& selection,
                                        const FilterRuleSet& rules);

// rules/<conference_id>.json: {layout, publisher, base_url?, include_patterns,
// exclude_patterns, heading_levels?}
FilterRuleSet load_rules_file(const std::filesystem::path& path);

// Compiles one pattern, honoring a leading `(?i)` prefix as the
// case-insensitive flag (std::regex has no inline modifiers).
std::regex compile_pattern(const std::string& pattern);

}  // namespace aegis::links
