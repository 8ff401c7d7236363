#include "aegis/webdriver.hpp"

#include "httplib.h"

namespace aegis::webdriver {

namespace {

nlohmann::json roundtrip(const std::string& base, const std::string& method,
                         const std::string& path, const nlohmann::json& body, int timeout_ms) {
    httplib::Client cli(base);
    cli.set_connection_timeout(0, timeout_ms * 1000LL);
    cli.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    httplib::Result res;
    if (method == "GET") {
        res = cli.Get(path);
    } else if (method == "DELETE") {
        res = cli.Delete(path);
    } else {
        res = cli.Post(path, body.dump(), "application/json");
    }
    if (!res)
        throw WebDriverError("unknown error",
                             "transport failure for " + method + " " + path + ": " +
                                 httplib::to_string(res.error()),
                             0);
    const auto parsed = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (res->status >= 400) {
        std::string code = "unknown error";
        std::string message = res->body;
        if (parsed.is_object() && parsed.contains("value") && parsed["value"].is_object()) {
            code = parsed["value"].value("error", code);
            message = parsed["value"].value("message", message);
        }
        throw WebDriverError(code, message, res->status);
    }
    if (parsed.is_discarded() || !parsed.is_object())
        throw WebDriverError("unknown error", "malformed response body for " + path, res->status);
    return parsed.value("value", nlohmann::json());
}

}  // namespace

Session::Session(std::string endpoint_base, std::string session_id, int timeout_ms)
    : endpoint_base_(std::move(endpoint_base)),
      session_id_(std::move(session_id)),
      timeout_ms_(timeout_ms),
      alive_(true) {}

Session::~Session() {
    if (!alive_) return;
    try {
        roundtrip(endpoint_base_, "DELETE", "/session/" + session_id_, {}, timeout_ms_);
    } catch (...) {
        // session teardown is best effort
    }
}

Session::Session(Session&& other) noexcept
    : endpoint_base_(std::move(other.endpoint_base_)),
      session_id_(std::move(other.session_id_)),
      timeout_ms_(other.timeout_ms_),
      alive_(other.alive_) {
    other.alive_ = false;
}

Session& Session::operator=(Session&& other) noexcept {
    if (this != &other) {
        endpoint_base_ = std::move(other.endpoint_base_);
        session_id_ = std::move(other.session_id_);
        timeout_ms_ = other.timeout_ms_;
        alive_ = other.alive_;
        other.alive_ = false;
    }
    return *this;
}

nlohmann::json Session::command(const std::string& method, const std::string& path,
                                const nlohmann::json& body) const {
    return roundtrip(endpoint_base_, method, "/session/" + session_id_ + path, body, timeout_ms_);
}

void Session::navigate(const std::string& url) {
    command("POST", "/url", {{"url", url}});
}

std::string Session::page_source() {
    return command("GET", "/source", {}).get<std::string>();
}

nlohmann::json Session::execute(const std::string& script,
                                const std::vector<nlohmann::json>& args) {
    return command("POST", "/execute/sync", {{"script", script}, {"args", args}});
}

std::optional<Element> Session::find(const std::string& css_selector) {
    try {
        const auto value = command("POST", "/element",
                                   {{"using", "css selector"}, {"value", css_selector}});
        return Element{value.at(kElementKey).get<std::string>()};
    } catch (const WebDriverError& e) {
        if (e.is_no_such_element()) return std::nullopt;
        throw;
    }
}

std::vector<Element> Session::find_all(const std::string& css_selector) {
    const auto value = command("POST", "/elements",
                               {{"using", "css selector"}, {"value", css_selector}});
    std::vector<Element> out;
    for (const auto& entry : value) out.push_back(Element{entry.at(kElementKey).get<std::string>()});
    return out;
}

void Session::click(const Element& element) {
    command("POST", "/element/" + element.id + "/click", nlohmann::json::object());
}

void Session::send_keys(const Element& element, const std::string& text) {
    command("POST", "/element/" + element.id + "/value", {{"text", text}});
}

void Session::clear(const Element& element) {
    command("POST", "/element/" + element.id + "/clear", nlohmann::json::object());
}

std::string Session::text(const Element& element) {
    return command("GET", "/element/" + element.id + "/text", {}).get<std::string>();
}

nlohmann::json Session::element_ref(const Element& element) {
    return {{kElementKey, element.id}};
}

Client::Client(std::string endpoint_base, int timeout_ms)
    : endpoint_base_(std::move(endpoint_base)), timeout_ms_(timeout_ms) {}

Session Client::new_session() const {
    const auto value = roundtrip(endpoint_base_, "POST", "/session",
                                 {{"capabilities", nlohmann::json::object()}}, timeout_ms_);
    return Session(endpoint_base_, value.at("sessionId").get<std::string>(), timeout_ms_);
}

}  // namespace aegis::webdriver
