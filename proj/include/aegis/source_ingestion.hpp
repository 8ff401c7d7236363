#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace aegis::ingest {

struct SourceRequest {
    std::string url;            // absolute http(s) URL
    std::string conference_id;  // lowercase token
    int year = 0;               // 4-digit
    std::optional<int> paper_limit;
    std::optional<int> resume_offset;
};

// Throws ConfigError when any invariant is violated.
void validate(const SourceRequest& req);

struct SourceDocument {
    std::string url;
    std::string html;
    std::string fetched_at;  // RFC 3339
    std::filesystem::path cache_path;
    bool from_cache = false;
};

struct FetchConfig {
    int render_wait_ms = 15000;  // hard cap on the post-navigation render wait
    int nav_timeout_ms = 30000;
    std::filesystem::path cache_dir = "./cache";
    std::string webdriver_url;  // browser automation endpoint
    bool force_refetch = false;
};

// <conference_id>/<year>/<url-digest>.html — deterministic, filesystem safe,
// distinct urls give distinct paths.
std::filesystem::path cache_key(const std::string& conference_id, int year,
                                const std::string& url);

// Cache hit: returns the cached bytes without touching the network. Miss:
// drives a browser session (navigate, wait for readiness up to
// render_wait_ms, take the serialized source) and writes the cache file
// atomically, plus a sidecar metadata JSON.
SourceDocument fetch_and_cache(const SourceRequest& req, const FetchConfig& cfg);

}  // namespace aegis::ingest
