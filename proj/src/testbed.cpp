#include "aegis/testbed.hpp"

#include "aegis/html.hpp"
#include "aegis/url.hpp"
#include "aegis/util.hpp"

#include "httplib.h"
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <regex>
#include <thread>

namespace aegis::testbed {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kElementKey = "element-6066-11e4-a52e-4f735466cecf";

std::string escape_attr(const std::string& value) {
    std::string out;
    out.reserve(value.size());
    for (char c : value) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

json wd_success(const json& value) { return json{{"value", value}}; }

void wd_error(httplib::Response& res, int status, const std::string& code,
              const std::string& message) {
    res.status = status;
    res.set_content(json{{"value", {{"error", code}, {"message", message}, {"stacktrace", ""}}}}
                        .dump(),
                    "application/json");
}

}  // namespace

FixtureCorpus FixtureCorpus::load(const fs::path& corpus_dir) {
    const fs::path manifest_path = corpus_dir / "manifest.json";
    if (!fs::is_regular_file(manifest_path))
        throw ManifestInvalid("missing manifest: " + manifest_path.string());
    json manifest;
    try {
        manifest = json::parse(util::read_file(manifest_path));
    } catch (const std::exception& e) {
        throw ManifestInvalid(std::string("manifest is not valid JSON: ") + e.what());
    }

    FixtureCorpus corpus;
    if (!manifest.contains("pages") || !manifest["pages"].is_array())
        throw ManifestInvalid("manifest needs a `pages` array");
    for (const auto& entry : manifest["pages"]) {
        const std::string path = entry.value("path", std::string());
        const std::string file = entry.value("file", std::string());
        if (path.empty() || path[0] != '/')
            throw ManifestInvalid("page path must start with '/': " + path);
        const fs::path full = corpus_dir / file;
        if (!fs::is_regular_file(full))
            throw ManifestInvalid("page file missing: " + full.string());
        corpus.pages[path] = util::read_file(full);
        if (entry.contains("ready_after_ms"))
            corpus.ready_after_ms[path] = entry["ready_after_ms"].get<int>();
    }
    if (manifest.contains("labels_csv")) {
        const fs::path labels_path = corpus_dir / manifest["labels_csv"].get<std::string>();
        if (!fs::is_regular_file(labels_path))
            throw ManifestInvalid("labels file missing: " + labels_path.string());
        corpus.labels = eval::load_labels_csv(labels_path);
        for (const auto& label : corpus.labels) {
            const auto parsed = url::parse(label.url);
            const std::string path = parsed ? parsed->path : label.url;
            if (!corpus.pages.count(path))
                throw ManifestInvalid("labeled url has no page: " + label.url);
        }
    }
    if (manifest.contains("agent_scripts")) {
        for (const auto& entry : manifest["agent_scripts"]) {
            AgentScript script;
            script.match_substring = entry.value("match_substring", std::string());
            if (script.match_substring.empty())
                throw ManifestInvalid("agent script needs match_substring");
            if (entry.contains("chunks"))
                script.chunks = entry["chunks"].get<std::vector<std::string>>();
            script.chunk_delay_ms = entry.value("chunk_delay_ms", 10);
            script.stall_ms = entry.value("stall_ms", 0);
            script.status = entry.value("status", 200);
            corpus.agent_scripts.push_back(std::move(script));
        }
    }
    if (manifest.contains("form")) {
        const auto& form = manifest["form"];
        corpus.form.confirmation_text =
            form.value("confirmation_text", corpus.form.confirmation_text);
        corpus.form.suppress_confirmation = form.value("suppress_confirmation", false);
        corpus.form.add_author_broken = form.value("add_author_broken", false);
        corpus.form.omit_add_author = form.value("omit_add_author", false);
    }
    return corpus;
}

struct Testbed::Impl {
    TestbedOptions options;
    FixtureCorpus corpus;
    httplib::Server server;
    std::thread server_thread;
    std::atomic<bool> stopping{false};
    int port = 0;

    mutable std::mutex log_mutex;
    std::vector<RequestLogEntry> requests;
    std::vector<std::string> scrolls;

    std::mutex submissions_mutex;

    struct FormRow {
        std::string name;
        std::string affiliation;
    };
    struct FormState {
        std::string title;
        std::string research_area;
        std::vector<FormRow> rows = {FormRow{}};
        bool confirmed = false;
    };
    struct ElementTarget {
        std::string kind;  // title, author-name, author-affiliation, add-author,
                           // research-area, submit, confirmation, static
        int index = 0;
        long generation = 0;
        std::string static_id;
    };
    struct WdSession {
        std::string current_path;
        bool is_form = false;
        std::string static_html;
        std::chrono::steady_clock::time_point ready_at;
        FormState form;
        long generation = 0;
        std::map<std::string, ElementTarget> elements;
        int next_element_id = 0;
    };
    std::mutex wd_mutex;
    std::map<std::string, WdSession> sessions;
    long next_session_id = 0;

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port); }

    std::string substitute(const std::string& raw) const {
        return util::replace_all(raw, "{{base}}", base_url());
    }

    void log_request(const httplib::Request& req) {
        if (util::starts_with(req.path, "/__testbed")) return;
        std::lock_guard lock(log_mutex);
        requests.push_back({req.method, req.path});
    }

    void record_submission(const FormState& form) {
        json payload;
        payload["title"] = form.title;
        auto authors = json::array();
        for (const auto& row : form.rows)
            authors.push_back({{"name", row.name}, {"affiliation", row.affiliation}});
        payload["authors"] = std::move(authors);
        payload["research_area"] = form.research_area;
        std::lock_guard lock(submissions_mutex);
        util::append_line(options.submissions_path, payload.dump());
    }

    std::string render_form_html(const FormState& form) const {
        std::string out = "<html><head><title>Premier Papers Nomination</title></head><body>\n";
        out += "<h1>Premier Papers Nomination</h1>\n";
        out += "<form id=\"nomination-form\" method=\"post\" action=\"/form\">\n";
        out += "<label>Paper Title <input id=\"paper-title\" name=\"title\" value=\"" +
               escape_attr(form.title) + "\"></label>\n<div id=\"authors\">\n";
        for (size_t i = 0; i < form.rows.size(); ++i) {
            out += "<div class=\"author-row\">";
            out += "<input id=\"author-name-" + std::to_string(i) + "\" value=\"" +
                   escape_attr(form.rows[i].name) + "\">";
            out += "<input id=\"author-affiliation-" + std::to_string(i) + "\" value=\"" +
                   escape_attr(form.rows[i].affiliation) + "\">";
            out += "</div>\n";
        }
        out += "</div>\n";
        if (!corpus.form.omit_add_author)
            out += "<button id=\"add-author\" type=\"button\">Add author</button>\n";
        out += "<label>Research Area <input id=\"research-area\" value=\"" +
               escape_attr(form.research_area) + "\"></label>\n";
        out += "<button id=\"submit-nomination\" type=\"submit\">Submit nomination</button>\n";
        out += "</form>\n";
        if (form.confirmed && !corpus.form.suppress_confirmation)
            out += "<div id=\"confirmation\">" + corpus.form.confirmation_text + "</div>\n";
        if (!corpus.form.omit_add_author)
            out += "<script>document.getElementById('add-author').addEventListener('click',"
                   "addAuthorRow);</script>\n";
        out += "</body></html>\n";
        return out;
    }

    // ---- webdriver helpers ----

    WdSession* session_of(const std::string& id) {
        const auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : &it->second;
    }

    std::string register_element(WdSession& session, ElementTarget target) {
        target.generation = session.generation;
        const std::string id = "el-" + std::to_string(++session.next_element_id);
        session.elements[id] = std::move(target);
        return id;
    }

    // nullptr when the reference is stale or unknown
    const ElementTarget* resolve_element(WdSession& session, const std::string& element_id) {
        const auto it = session.elements.find(element_id);
        if (it == session.elements.end()) return nullptr;
        if (it->second.generation != session.generation) return nullptr;
        return &it->second;
    }

    std::optional<ElementTarget> match_selector(WdSession& session, const std::string& css) {
        if (!util::starts_with(css, "#")) return std::nullopt;
        const std::string id = css.substr(1);
        if (session.is_form) {
            const FormState& form = session.form;
            if (id == "paper-title") return ElementTarget{"title"};
            if (id == "add-author" && !corpus.form.omit_add_author)
                return ElementTarget{"add-author"};
            if (id == "research-area") return ElementTarget{"research-area"};
            if (id == "submit-nomination") return ElementTarget{"submit"};
            if (id == "confirmation") {
                if (form.confirmed && !corpus.form.suppress_confirmation)
                    return ElementTarget{"confirmation"};
                return std::nullopt;
            }
            static const std::regex row_re(R"(^author-(name|affiliation)-(\d+)$)");
            std::smatch m;
            if (std::regex_match(id, m, row_re)) {
                const int index = std::stoi(m[2].str());
                if (index >= static_cast<int>(form.rows.size())) return std::nullopt;
                return ElementTarget{m[1].str() == "name" ? "author-name" : "author-affiliation",
                                     index};
            }
            return std::nullopt;
        }
        const auto doc = html::parse(session.static_html);
        if (html::element_by_id(*doc.root, id) == nullptr) return std::nullopt;
        ElementTarget target{"static"};
        target.static_id = id;
        return target;
    }

    void click_target(WdSession& session, const ElementTarget& target) {
        if (target.kind == "add-author") {
            if (!corpus.form.add_author_broken) session.form.rows.emplace_back();
            return;
        }
        if (target.kind == "submit") {
            if (util::trim(session.form.title).empty()) return;  // invalid post, no transaction
            record_submission(session.form);
            session.form.confirmed = true;
            return;
        }
    }

    std::string* field_of(WdSession& session, const ElementTarget& target) {
        if (target.kind == "title") return &session.form.title;
        if (target.kind == "research-area") return &session.form.research_area;
        if (target.kind == "author-name") return &session.form.rows[target.index].name;
        if (target.kind == "author-affiliation")
            return &session.form.rows[target.index].affiliation;
        return nullptr;
    }

    std::string text_of(WdSession& session, const ElementTarget& target) {
        if (target.kind == "confirmation") return corpus.form.confirmation_text;
        if (target.kind == "static") {
            const auto doc = html::parse(session.static_html);
            if (const auto* node = html::element_by_id(*doc.root, target.static_id))
                return html::inner_text(*node);
            return "";
        }
        const std::string* field = field_of(session, target);
        return field ? *field : std::string();
    }

    int ready_delay_ms(const std::string& path) const {
        const auto it = corpus.ready_after_ms.find(path);
        return it == corpus.ready_after_ms.end() ? 0 : it->second;
    }

    void setup_routes();
    void handle_agent(const httplib::Request& req, httplib::Response& res);
    void handle_find(const httplib::Request& req, httplib::Response& res, bool plural);
};

void Testbed::Impl::handle_agent(const httplib::Request& req, httplib::Response& res) {
    std::string prompt;
    const auto body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
    if (body.is_object() && body.contains("command") && body["command"].is_string())
        prompt = body["command"].get<std::string>();
    if (prompt.empty()) {
        res.status = 400;
        res.set_content("missing command", "text/plain");
        return;
    }

    const AgentScript* script = nullptr;
    for (const auto& candidate : corpus.agent_scripts)
        if (prompt.find(candidate.match_substring) != std::string::npos) {
            script = &candidate;
            break;
        }

    if (script != nullptr && script->status != 200) {
        res.status = script->status;
        res.set_content("scripted failure", "text/plain");
        return;
    }

    std::vector<std::string> chunks;
    int chunk_delay_ms = 10;
    int stall_ms = 0;
    if (script != nullptr) {
        chunks = script->chunks;
        chunk_delay_ms = script->chunk_delay_ms;
        stall_ms = script->stall_ms;
    } else {
        // default behavior: act like an extraction agent over the fixture page
        // named in the prompt
        static const std::regex url_re(R"(https?://[^\s"'<>]+)");
        std::smatch m;
        std::string page_url;
        if (std::regex_search(prompt, m, url_re)) page_url = m[0].str();
        const auto parsed = url::parse(page_url);
        const auto it = parsed ? corpus.pages.find(parsed->path) : corpus.pages.end();
        if (page_url.empty() || it == corpus.pages.end()) {
            res.status = 404;
            res.set_content("no fixture for prompt", "text/plain");
            return;
        }
        const auto transcript =
            agent::extract_transcript(substitute(it->second), page_url, agent::KeywordConfig{});
        const std::string& text = transcript.assembled_text;
        const size_t third = std::max<size_t>(1, text.size() / 3);
        for (size_t pos = 0; pos < text.size(); pos += third)
            chunks.push_back(text.substr(pos, third));
    }

    auto* stopping_flag = &stopping;
    res.set_chunked_content_provider(
        "text/plain",
        [chunks, chunk_delay_ms, stall_ms, stopping_flag](size_t, httplib::DataSink& sink) {
            if (stall_ms > 0) {
                const auto deadline = std::chrono::steady_clock::now() +
                                      std::chrono::milliseconds(stall_ms);
                while (std::chrono::steady_clock::now() < deadline && !stopping_flag->load())
                    std::this_thread::sleep_for(std::chrono::milliseconds(25));
                sink.done();
                return true;
            }
            for (const auto& chunk : chunks) {
                if (stopping_flag->load()) break;
                if (!sink.write(chunk.data(), chunk.size())) break;
                std::this_thread::sleep_for(std::chrono::milliseconds(chunk_delay_ms));
            }
            sink.done();
            return true;
        });
}

void Testbed::Impl::handle_find(const httplib::Request& req, httplib::Response& res,
                                bool plural) {
    std::lock_guard lock(wd_mutex);
    WdSession* session = session_of(req.matches[1].str());
    if (!session) return wd_error(res, 404, "invalid session id", "no session");
    const auto body = json::parse(req.body, nullptr, false);
    const std::string selector =
        body.is_object() ? body.value("value", std::string()) : std::string();
    auto target = match_selector(*session, selector);
    if (!target) {
        if (plural) {
            res.set_content(wd_success(json::array()).dump(), "application/json");
            return;
        }
        return wd_error(res, 404, "no such element", "no element matches " + selector);
    }
    const std::string id = register_element(*session, *target);
    const json ref = {{kElementKey, id}};
    res.set_content(wd_success(plural ? json::array({ref}) : ref).dump(), "application/json");
}

void Testbed::Impl::setup_routes() {
    server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response&) {
        log_request(req);
        return httplib::Server::HandlerResponse::Unhandled;
    });

    // ---- introspection ----
    server.Get("/__testbed/requests", [this](const httplib::Request&, httplib::Response& res) {
        json out = json::array();
        {
            std::lock_guard lock(log_mutex);
            for (const auto& entry : requests)
                out.push_back({{"method", entry.method}, {"path", entry.path}});
        }
        res.set_content(out.dump(), "application/json");
    });
    server.Get("/__testbed/scrolls", [this](const httplib::Request&, httplib::Response& res) {
        json out = json::array();
        {
            std::lock_guard lock(log_mutex);
            for (const auto& entry : scrolls) out.push_back(entry);
        }
        res.set_content(out.dump(), "application/json");
    });
    server.Post("/__testbed/reset", [this](const httplib::Request&, httplib::Response& res) {
        {
            std::lock_guard lock(log_mutex);
            requests.clear();
            scrolls.clear();
        }
        res.set_content("ok", "text/plain");
    });

    // ---- agent ----
    server.Post("/agent", [this](const httplib::Request& req, httplib::Response& res) {
        handle_agent(req, res);
    });

    // ---- nomination form (direct HTTP path) ----
    server.Get("/form", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(render_form_html(FormState{}), "text/html");
    });
    server.Post("/form", [this](const httplib::Request& req, httplib::Response& res) {
        FormState form;
        const auto body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
        if (body.is_object()) {
            form.title = body.value("title", std::string());
            form.research_area = body.value("research_area", std::string());
            form.rows.clear();
            if (body.contains("authors"))
                for (const auto& author : body["authors"])
                    form.rows.push_back({author.value("name", std::string()),
                                         author.value("affiliation", std::string())});
        } else {
            form.title = req.get_param_value("title");
            form.research_area = req.get_param_value("research_area");
            form.rows.clear();
            for (int i = 0;; ++i) {
                const std::string name_key = "author_name_" + std::to_string(i);
                if (!req.has_param(name_key)) break;
                form.rows.push_back(
                    {req.get_param_value(name_key),
                     req.get_param_value("author_affiliation_" + std::to_string(i))});
            }
        }
        if (util::trim(form.title).empty() || form.rows.empty()) {
            res.status = 400;
            res.set_content("<html><body>Missing title or authors</body></html>", "text/html");
            return;
        }
        record_submission(form);
        form.confirmed = true;
        res.set_content(render_form_html(form), "text/html");
    });

    // ---- webdriver remote end ----
    server.Post("/wd/session", [this](const httplib::Request&, httplib::Response& res) {
        std::lock_guard lock(wd_mutex);
        const std::string id = "sess-" + std::to_string(++next_session_id);
        sessions[id] = WdSession{};
        res.set_content(
            wd_success({{"sessionId", id}, {"capabilities", json::object()}}).dump(),
            "application/json");
    });
    server.Delete(R"(/wd/session/([^/]+))",
                  [this](const httplib::Request& req, httplib::Response& res) {
                      std::lock_guard lock(wd_mutex);
                      sessions.erase(req.matches[1].str());
                      res.set_content(wd_success(nullptr).dump(), "application/json");
                  });
    server.Post(R"(/wd/session/([^/]+)/url)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    std::lock_guard lock(wd_mutex);
                    WdSession* session = session_of(req.matches[1].str());
                    if (!session) return wd_error(res, 404, "invalid session id", "no session");
                    const auto body = json::parse(req.body, nullptr, false);
                    const std::string target_url =
                        body.is_object() ? body.value("url", std::string()) : std::string();
                    const auto parsed = url::parse(target_url);
                    if (!parsed)
                        return wd_error(res, 400, "invalid argument", "bad url " + target_url);
                    ++session->generation;
                    session->elements.clear();
                    session->current_path = parsed->path;
                    session->form = FormState{};
                    session->is_form = (parsed->path == "/form");
                    session->ready_at = std::chrono::steady_clock::now();
                    if (!session->is_form) {
                        const auto it = corpus.pages.find(parsed->path);
                        if (it == corpus.pages.end())
                            return wd_error(res, 500, "unknown error",
                                            "navigation failed: " + target_url);
                        session->static_html = substitute(it->second);
                        session->ready_at +=
                            std::chrono::milliseconds(ready_delay_ms(parsed->path));
                    }
                    res.set_content(wd_success(nullptr).dump(), "application/json");
                });
    server.Get(R"(/wd/session/([^/]+)/source)",
               [this](const httplib::Request& req, httplib::Response& res) {
                   std::lock_guard lock(wd_mutex);
                   WdSession* session = session_of(req.matches[1].str());
                   if (!session) return wd_error(res, 404, "invalid session id", "no session");
                   const std::string source =
                       session->is_form ? render_form_html(session->form) : session->static_html;
                   res.set_content(wd_success(source).dump(), "application/json");
               });
    server.Post(R"(/wd/session/([^/]+)/execute/sync)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    std::lock_guard lock(wd_mutex);
                    WdSession* session = session_of(req.matches[1].str());
                    if (!session) return wd_error(res, 404, "invalid session id", "no session");
                    const auto body = json::parse(req.body, nullptr, false);
                    const std::string script =
                        body.is_object() ? body.value("script", std::string()) : std::string();
                    if (script.find("readyState") != std::string::npos) {
                        const bool ready = std::chrono::steady_clock::now() >= session->ready_at;
                        res.set_content(wd_success(ready ? "complete" : "loading").dump(),
                                        "application/json");
                        return;
                    }
                    if (script.find("scrollIntoView") != std::string::npos) {
                        std::string element_id;
                        if (body.contains("args") && body["args"].is_array() &&
                            !body["args"].empty() && body["args"][0].is_object())
                            element_id = body["args"][0].value(kElementKey, std::string());
                        if (!resolve_element(*session, element_id))
                            return wd_error(res, 404, "stale element reference",
                                            "element is not attached to the page");
                        {
                            std::lock_guard log_lock(log_mutex);
                            scrolls.push_back(session->elements[element_id].kind + ":" +
                                              std::to_string(session->elements[element_id].index));
                        }
                        res.set_content(wd_success(nullptr).dump(), "application/json");
                        return;
                    }
                    res.set_content(wd_success(nullptr).dump(), "application/json");
                });
    server.Post(R"(/wd/session/([^/]+)/element)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    handle_find(req, res, /*plural=*/false);
                });
    server.Post(R"(/wd/session/([^/]+)/elements)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    handle_find(req, res, /*plural=*/true);
                });
    server.Post(R"(/wd/session/([^/]+)/element/([^/]+)/click)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    std::lock_guard lock(wd_mutex);
                    WdSession* session = session_of(req.matches[1].str());
                    if (!session) return wd_error(res, 404, "invalid session id", "no session");
                    const ElementTarget* target = resolve_element(*session, req.matches[2].str());
                    if (!target)
                        return wd_error(res, 404, "stale element reference", "element gone");
                    click_target(*session, *target);
                    res.set_content(wd_success(nullptr).dump(), "application/json");
                });
    server.Post(R"(/wd/session/([^/]+)/element/([^/]+)/value)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    std::lock_guard lock(wd_mutex);
                    WdSession* session = session_of(req.matches[1].str());
                    if (!session) return wd_error(res, 404, "invalid session id", "no session");
                    const ElementTarget* target = resolve_element(*session, req.matches[2].str());
                    if (!target)
                        return wd_error(res, 404, "stale element reference", "element gone");
                    const auto body = json::parse(req.body, nullptr, false);
                    std::string* field = field_of(*session, *target);
                    if (field && body.is_object())
                        *field += body.value("text", std::string());  // keys append
                    res.set_content(wd_success(nullptr).dump(), "application/json");
                });
    server.Post(R"(/wd/session/([^/]+)/element/([^/]+)/clear)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    std::lock_guard lock(wd_mutex);
                    WdSession* session = session_of(req.matches[1].str());
                    if (!session) return wd_error(res, 404, "invalid session id", "no session");
                    const ElementTarget* target = resolve_element(*session, req.matches[2].str());
                    if (!target)
                        return wd_error(res, 404, "stale element reference", "element gone");
                    if (std::string* field = field_of(*session, *target)) field->clear();
                    res.set_content(wd_success(nullptr).dump(), "application/json");
                });
    server.Get(R"(/wd/session/([^/]+)/element/([^/]+)/text)",
               [this](const httplib::Request& req, httplib::Response& res) {
                   std::lock_guard lock(wd_mutex);
                   WdSession* session = session_of(req.matches[1].str());
                   if (!session) return wd_error(res, 404, "invalid session id", "no session");
                   const ElementTarget* target = resolve_element(*session, req.matches[2].str());
                   if (!target)
                       return wd_error(res, 404, "stale element reference", "element gone");
                   res.set_content(wd_success(text_of(*session, *target)).dump(),
                                   "application/json");
               });

    // ---- corpus pages (after all specific routes) ----
    server.Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
        const auto it = corpus.pages.find(req.path);
        if (it == corpus.pages.end()) {
            res.status = 404;
            res.set_content("not found", "text/plain");
            return;
        }
        res.set_content(substitute(it->second), "text/html");
    });
}

Testbed::Testbed(TestbedOptions options) : impl_(std::make_unique<Impl>()) {
    impl_->options = std::move(options);
    if (impl_->options.submissions_path.empty())
        impl_->options.submissions_path =
            impl_->options.corpus_dir / "received_submissions.jsonl";
    impl_->corpus = FixtureCorpus::load(impl_->options.corpus_dir);
    impl_->setup_routes();
}

Testbed::~Testbed() { stop(); }

int Testbed::start() {
    if (impl_->options.port == 0) {
        impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
        if (impl_->port <= 0) throw PortInUse("could not bind any port on 127.0.0.1");
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", impl_->options.port))
            throw PortInUse("port " + std::to_string(impl_->options.port) + " is unavailable");
        impl_->port = impl_->options.port;
    }
    port_ = impl_->port;
    impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return impl_->port;
}

void Testbed::stop() {
    if (!impl_) return;
    impl_->stopping.store(true);
    if (impl_->server.is_running()) impl_->server.stop();
    if (impl_->server_thread.joinable()) impl_->server_thread.join();
}

void Testbed::wait() {
    if (impl_->server_thread.joinable()) impl_->server_thread.join();
}

std::string Testbed::base_url() const { return impl_->base_url(); }

const FixtureCorpus& Testbed::corpus() const { return impl_->corpus; }

const std::filesystem::path& Testbed::submissions_path() const {
    return impl_->options.submissions_path;
}

std::vector<RequestLogEntry> Testbed::request_log() const {
    std::lock_guard lock(impl_->log_mutex);
    return impl_->requests;
}

std::vector<std::string> Testbed::scroll_log() const {
    std::lock_guard lock(impl_->log_mutex);
    return impl_->scrolls;
}

void Testbed::reset_logs() {
    std::lock_guard lock(impl_->log_mutex);
    impl_->requests.clear();
    impl_->scrolls.clear();
}

}  // namespace aegis::testbed
