#include "aegis/source_ingestion.hpp"

#include "aegis/errors.hpp"
#include "aegis/url.hpp"
#include "aegis/util.hpp"
#include "aegis/webdriver.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <chrono>
#include <thread>

namespace aegis::ingest {

namespace fs = std::filesystem;

void validate(const SourceRequest& req) {
    if (!url::is_absolute_http(req.url))
        throw ConfigError("url must be absolute http(s): " + req.url);
    if (req.conference_id.empty())
        throw ConfigError("conference_id must be non-empty");
    for (char c : req.conference_id)
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '_'))
            throw ConfigError("conference_id must be a lowercase token: " + req.conference_id);
    if (req.year < 1000 || req.year > 9999)
        throw ConfigError("year must be a 4-digit integer: " + std::to_string(req.year));
    if (req.paper_limit && *req.paper_limit < 1)
        throw ConfigError("paper_limit must be >= 1");
    if (req.resume_offset && *req.resume_offset < 0)
        throw ConfigError("resume_offset must be >= 0");
}

fs::path cache_key(const std::string& conference_id, int year, const std::string& url) {
    return fs::path(conference_id) / std::to_string(year) /
           (util::sha256_hex(url).substr(0, 32) + ".html");
}

namespace {

fs::path sidecar_path(const fs::path& html_path) {
    fs::path p = html_path;
    p.replace_extension(".meta.json");
    return p;
}

std::string render_and_capture(const SourceRequest& req, const FetchConfig& cfg) {
    webdriver::Client browser(cfg.webdriver_url, cfg.nav_timeout_ms);
    try {
        auto session = browser.new_session();
        session.navigate(req.url);
        // Wait for the page to settle: poll readiness until idle or the
        // render cap elapses, then take whatever has rendered.
        const auto deadline =
            std::chrono::steady_clock::now() + std::chrono::milliseconds(cfg.render_wait_ms);
        while (std::chrono::steady_clock::now() < deadline) {
            const auto state = session.execute("return document.readyState");
            if (state.is_string() && state.get<std::string>() == "complete") break;
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
        }
        return session.page_source();
    } catch (const webdriver::WebDriverError& e) {
        throw NavigationTimeout("could not render " + req.url + ": " + e.what());
    }
}

}  // namespace

SourceDocument fetch_and_cache(const SourceRequest& req, const FetchConfig& cfg) {
    validate(req);
    const fs::path rel = cache_key(req.conference_id, req.year, req.url);
    const fs::path html_path = cfg.cache_dir / rel;
    const fs::path meta_path = sidecar_path(html_path);

    if (!cfg.force_refetch) {
        if (const auto cached = util::read_file_if_exists(html_path)) {
            SourceDocument doc;
            doc.url = req.url;
            doc.html = *cached;
            doc.cache_path = rel;
            doc.from_cache = true;
            if (const auto meta = util::read_file_if_exists(meta_path)) {
                const auto j = nlohmann::json::parse(*meta, nullptr, false);
                if (j.is_object()) doc.fetched_at = j.value("fetched_at", std::string());
            }
            return doc;
        }
    }

    SourceDocument doc;
    doc.url = req.url;
    doc.html = render_and_capture(req, cfg);
    doc.fetched_at = util::rfc3339_now();
    doc.cache_path = rel;
    doc.from_cache = false;
    if (doc.html.empty())
        throw NavigationTimeout("rendered page is empty: " + req.url);

    try {
        util::atomic_write_file(html_path, doc.html);
        nlohmann::json meta{{"url", req.url},
                            {"fetched_at", doc.fetched_at},
                            {"conference_id", req.conference_id},
                            {"year", req.year}};
        util::atomic_write_file(meta_path, meta.dump(2));
    } catch (const std::exception& e) {
        throw CacheWriteError(e.what());
    }
    return doc;
}

}  // namespace aegis::ingest
