#pragma once

#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aegis::webdriver {

// W3C WebDriver element identifier key.
inline constexpr const char* kElementKey = "element-6066-11e4-a52e-4f735466cecf";

struct Element {
    std::string id;
};

class WebDriverError : public std::runtime_error {
public:
    WebDriverError(std::string error_code, const std::string& message, int http_status)
        : std::runtime_error(error_code + ": " + message),
          error_code_(std::move(error_code)),
          http_status_(http_status) {}

    const std::string& error_code() const { return error_code_; }
    int http_status() const { return http_status_; }
    bool is_stale_element() const { return error_code_ == "stale element reference"; }
    bool is_no_such_element() const { return error_code_ == "no such element"; }

private:
    std::string error_code_;
    int http_status_;
};

// One remote browsing context, created via New Session and deleted on
// destruction. Move-only.
class Session {
public:
    Session(std::string endpoint_base, std::string session_id, int timeout_ms);
    ~Session();
    Session(Session&&) noexcept;
    Session& operator=(Session&&) noexcept;
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const { return session_id_; }

    void navigate(const std::string& url);
    std::string page_source();
    nlohmann::json execute(const std::string& script,
                           const std::vector<nlohmann::json>& args = {});
    std::optional<Element> find(const std::string& css_selector);
    std::vector<Element> find_all(const std::string& css_selector);
    void click(const Element& element);
    void send_keys(const Element& element, const std::string& text);
    void clear(const Element& element);
    std::string text(const Element& element);

    static nlohmann::json element_ref(const Element& element);

private:
    nlohmann::json command(const std::string& method, const std::string& path,
                           const nlohmann::json& body) const;

    std::string endpoint_base_;
    std::string session_id_;
    int timeout_ms_ = 30000;
    bool alive_ = false;
};

class Client {
public:
    explicit Client(std::string endpoint_base, int timeout_ms = 30000);

    Session new_session() const;
    const std::string& endpoint_base() const { return endpoint_base_; }

private:
    std::string endpoint_base_;
    int timeout_ms_;
};

}  // namespace aegis::webdriver
