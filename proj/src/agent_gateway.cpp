#include "aegis/agent_gateway.hpp"

#include "aegis/html.hpp"
#include "aegis/util.hpp"

#include "httplib.h"
#include <nlohmann/json.hpp>

#include <chrono>
#include <thread>

namespace aegis::agent {

namespace {

std::pair<std::string, std::string> split_base_and_path(const std::string& base_url,
                                                        const std::string& route) {
    // httplib::Client accepts scheme://host:port; anything after the
    // authority belongs on the path side.
    const size_t scheme_end = base_url.find("://");
    const size_t path_start =
        (scheme_end == std::string::npos) ? base_url.find('/')
                                          : base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {base_url, route};
    return {base_url.substr(0, path_start), base_url.substr(path_start) + route};
}

}  // namespace

AgentTranscript invoke_agent(const AgentEndpoint& endpoint, const std::string& prompt,
                             const ChunkSink& sink) {
    const auto [host_part, path] = split_base_and_path(endpoint.base_url, endpoint.route);
    httplib::Client cli(host_part);
    const auto connect_us = static_cast<long long>(endpoint.request_timeout_s * 1e6);
    const auto idle_us = static_cast<long long>(endpoint.stream_idle_timeout_s * 1e6);
    cli.set_connection_timeout(0, connect_us);
    cli.set_read_timeout(idle_us / 1000000, idle_us % 1000000);

    AgentTranscript transcript;
    transcript.prompt = prompt;
    transcript.backend = "live";

    const auto start = std::chrono::steady_clock::now();
    httplib::Request req;
    req.method = "POST";
    req.path = path;
    req.body = nlohmann::json{{"command", prompt}}.dump();
    req.set_header("Content-Type", "application/json");
    req.content_receiver = [&](const char* data, size_t len, uint64_t, uint64_t) {
        transcript.assembled_text.append(data, len);
        ++transcript.event_count;
        if (sink) sink(std::string_view(data, len));
        return true;
    };
    auto res = cli.send(req);
    transcript.duration_ms = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              start)
            .count());

    if (!res) {
        switch (res.error()) {
            case httplib::Error::Connection:
            case httplib::Error::ConnectionTimeout:
                throw AgentError(AgentError::Kind::ConnectTimeout,
                                 "cannot reach agent at " + endpoint.base_url + ": " +
                                     httplib::to_string(res.error()));
            case httplib::Error::Read:
                throw AgentError(AgentError::Kind::StreamIdleTimeout,
                                 "agent stream stalled beyond " +
                                     std::to_string(endpoint.stream_idle_timeout_s) + "s");
            default:
                throw AgentError(AgentError::Kind::ConnectTimeout,
                                 "agent transport error: " + httplib::to_string(res.error()));
        }
    }
    if (res->status < 200 || res->status >= 300)
        throw AgentError(AgentError::Kind::Http,
                         "agent returned HTTP " + std::to_string(res->status), res->status);
    return transcript;
}

AgentTranscript invoke_with_retry(const AgentEndpoint& endpoint, const std::string& prompt,
                                  const RetryPolicy& policy, const ChunkSink& sink) {
    int backoff_ms = policy.backoff_base_ms;
    for (int attempt = 0;; ++attempt) {
        try {
            return invoke_agent(endpoint, prompt, sink);
        } catch (const AgentError&) {
            if (attempt >= policy.max_retries) throw;
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
    }
}

std::optional<std::string> HttpFixtureStore::get(const std::string& absolute_url) const {
    const auto [host_part, path] = split_base_and_path(absolute_url, "");
    httplib::Client cli(host_part);
    cli.set_connection_timeout(10, 0);
    cli.set_read_timeout(10, 0);
    auto res = cli.Get(path.empty() ? "/" : path);
    if (!res || res->status != 200) return std::nullopt;
    return res->body;
}

std::string strip_superscript_markers(const std::string& name) {
    // unicode superscript digits: ¹ ² ³ (c2 bx) and ⁰ ⁴-⁹ (e2 81 bx)
    std::string out = util::trim(name);
    while (!out.empty()) {
        const unsigned char last = static_cast<unsigned char>(out.back());
        if (last == ',' || last == '*' || last == ' ' ||
            std::isdigit(last)) {  // plain-digit footnotes too
            out.pop_back();
            continue;
        }
        if (out.size() >= 2) {
            const unsigned char b0 = static_cast<unsigned char>(out[out.size() - 2]);
            if (b0 == 0xc2 && (last == 0xb9 || last == 0xb2 || last == 0xb3)) {
                out.erase(out.size() - 2);
                continue;
            }
        }
        if (out.size() >= 3) {
            const unsigned char b0 = static_cast<unsigned char>(out[out.size() - 3]);
            const unsigned char b1 = static_cast<unsigned char>(out[out.size() - 2]);
            if (b0 == 0xe2 && b1 == 0x81 && last >= 0xb0 && last <= 0xb9) {
                out.erase(out.size() - 3);
                continue;
            }
        }
        break;
    }
    return util::trim(out);
}

AgentTranscript extract_transcript(const std::string& page_html, const std::string& absolute_url,
                                   const KeywordConfig& cfg) {
    const auto doc = html::parse(page_html);
    const html::Node& root = *doc.root;

    std::string title;
    if (const auto* node = html::first_element_with_class(root, "", "paper-title"))
        title = html::inner_text(*node);
    else if (const auto* h1 = html::first_element(root, "h1"))
        title = html::inner_text(*h1);

    std::string research_area;
    if (const auto* node = html::first_element_with_class(root, "", "research-area"))
        research_area = html::inner_text(*node);

    struct Author {
        std::string name;
        std::vector<std::string> affiliations;
    };
    std::vector<Author> authors;
    for (const auto* li : html::elements_with_class(root, "", "author")) {
        Author author;
        if (const auto* name = html::first_element_with_class(*li, "", "author-name"))
            author.name = strip_superscript_markers(html::inner_text(*name, {"sup"}));
        for (const auto* aff : html::elements_with_class(*li, "", "author-affiliation"))
            author.affiliations.push_back(html::inner_text(*aff));
        if (!author.name.empty()) authors.push_back(std::move(author));
    }

    std::vector<std::string> institutions;
    for (const auto& author : authors)
        for (const auto& aff : author.affiliations)
            if (std::find(institutions.begin(), institutions.end(), aff) == institutions.end())
                institutions.push_back(aff);

    auto contains_marker = [&](const std::string& text) {
        for (const auto& marker : cfg.country_markers)
            if (util::icontains(text, marker)) return true;
        for (const auto& marker : cfg.institution_markers)
            if (util::icontains(text, marker)) return true;
        return false;
    };

    bool claims_match = false;
    for (const auto& author : authors)
        for (const auto& aff : author.affiliations)
            if (contains_marker(aff)) claims_match = true;
    // No declared author list: fall back to a whole-page scan. This is the
    // naive-reader behavior that front-matter pages like a table of contents
    // can trip.
    if (authors.empty() && contains_marker(html::inner_text(root))) claims_match = true;

    nlohmann::json block;
    auto authors_json = nlohmann::json::array();
    for (const auto& author : authors) {
        std::string joined;
        for (size_t i = 0; i < author.affiliations.size(); ++i) {
            if (i > 0) joined += "; ";
            joined += author.affiliations[i];
        }
        authors_json.push_back({{"name", author.name}, {"affiliation", joined}});
    }
    block["authors"] = std::move(authors_json);
    block["institutions"] = institutions;

    AgentTranscript transcript;
    transcript.backend = "offline";
    transcript.prompt = absolute_url;
    std::string text = "Paper Title: " + title + "\n\n```json\n" + block.dump() + "\n```\n";
    if (!research_area.empty()) text += "Research Area: " + research_area + "\n";
    text += "India Affiliation: ";
    text += claims_match ? "YES" : "NO";
    text += "\n";
    transcript.assembled_text = std::move(text);
    transcript.event_count = 1;
    return transcript;
}

AgentTranscript offline_extract(const std::string& absolute_url, const FixtureStore& store,
                                const KeywordConfig& cfg) {
    const auto page = store.get(absolute_url);
    if (!page) throw FixtureMissing("no fixture page for " + absolute_url);
    return extract_transcript(*page, absolute_url, cfg);
}

}  // namespace aegis::agent
