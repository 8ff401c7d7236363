#include "aegis/url.hpp"

#include "aegis/util.hpp"

#include <cctype>

namespace aegis::url {

namespace {

bool is_scheme_char(char c, bool first) {
    if (std::isalpha(static_cast<unsigned char>(c))) return true;
    if (first) return false;
    return std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

// authority = [userinfo@]host[:port]; only the host is case-folded
std::string normalize_authority(std::string_view authority) {
    const size_t at = authority.rfind('@');
    const size_t host_start = (at == std::string_view::npos) ? 0 : at + 1;
    size_t host_end = authority.size();
    if (host_start < authority.size() && authority[host_start] == '[') {
        // IPv6 literal
        const size_t close = authority.find(']', host_start);
        host_end = (close == std::string_view::npos) ? authority.size() : close + 1;
    } else {
        const size_t colon = authority.find(':', host_start);
        if (colon != std::string_view::npos) host_end = colon;
    }
    std::string out(authority);
    for (size_t i = host_start; i < host_end; ++i)
        out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
    return out;
}

}  // namespace

std::string Url::recompose(bool include_fragment) const {
    std::string out;
    if (!scheme.empty()) {
        out += scheme;
        out += ':';
    }
    if (has_authority) {
        out += "//";
        out += authority;
    }
    out += path;
    if (has_query) {
        out += '?';
        out += query;
    }
    if (include_fragment && has_fragment) {
        out += '#';
        out += fragment;
    }
    return out;
}

std::optional<Url> parse(std::string_view input) {
    Url u;
    std::string_view rest = input;

    // fragment
    if (const size_t hash = rest.find('#'); hash != std::string_view::npos) {
        u.fragment = std::string(rest.substr(hash + 1));
        u.has_fragment = true;
        rest = rest.substr(0, hash);
    }
    // scheme
    if (!rest.empty() && is_scheme_char(rest[0], true)) {
        size_t i = 1;
        while (i < rest.size() && is_scheme_char(rest[i], false)) ++i;
        if (i < rest.size() && rest[i] == ':') {
            u.scheme = util::to_lower(rest.substr(0, i));
            rest = rest.substr(i + 1);
        }
    }
    // authority
    if (rest.size() >= 2 && rest[0] == '/' && rest[1] == '/') {
        rest = rest.substr(2);
        size_t end = rest.size();
        for (size_t i = 0; i < rest.size(); ++i) {
            if (rest[i] == '/' || rest[i] == '?') {
                end = i;
                break;
            }
        }
        u.authority = normalize_authority(rest.substr(0, end));
        u.has_authority = true;
        rest = rest.substr(end);
    }
    // query
    if (const size_t q = rest.find('?'); q != std::string_view::npos) {
        u.query = std::string(rest.substr(q + 1));
        u.has_query = true;
        rest = rest.substr(0, q);
    }
    u.path = std::string(rest);
    return u;
}

bool is_absolute_http(std::string_view input) {
    const auto u = parse(input);
    if (!u) return false;
    return (u->scheme == "http" || u->scheme == "https") && u->has_authority &&
           !u->authority.empty();
}

std::string remove_dot_segments(std::string_view path) {
    std::string input(path);
    std::string output;
    while (!input.empty()) {
        if (util::starts_with(input, "../")) {
            input.erase(0, 3);
        } else if (util::starts_with(input, "./")) {
            input.erase(0, 2);
        } else if (util::starts_with(input, "/./")) {
            input.erase(0, 2);  // keep leading '/'
        } else if (input == "/.") {
            input = "/";
        } else if (util::starts_with(input, "/../") || input == "/..") {
            if (input == "/..")
                input = "/";
            else
                input.erase(0, 3);  // keep leading '/'
            const size_t last = output.rfind('/');
            output.erase(last == std::string::npos ? 0 : last);
        } else if (input == "." || input == "..") {
            input.clear();
        } else {
            size_t start = (input[0] == '/') ? 1 : 0;
            size_t next = input.find('/', start);
            if (next == std::string::npos) next = input.size();
            output.append(input, 0, next);
            input.erase(0, next);
        }
    }
    return output;
}

std::optional<std::string> resolve(std::string_view base, std::string_view ref) {
    const auto base_url = parse(base);
    if (!base_url || base_url->scheme.empty() || !base_url->has_authority) return std::nullopt;
    const auto r = parse(ref);
    if (!r) return std::nullopt;

    Url target;
    if (!r->scheme.empty()) {
        target = *r;
        target.path = remove_dot_segments(target.path);
    } else {
        target.scheme = base_url->scheme;
        if (r->has_authority) {
            target.authority = r->authority;
            target.has_authority = true;
            target.path = remove_dot_segments(r->path);
            target.query = r->query;
            target.has_query = r->has_query;
        } else {
            target.authority = base_url->authority;
            target.has_authority = base_url->has_authority;
            if (r->path.empty()) {
                target.path = base_url->path;
                target.query = r->has_query ? r->query : base_url->query;
                target.has_query = r->has_query || base_url->has_query;
            } else {
                if (r->path[0] == '/') {
                    target.path = remove_dot_segments(r->path);
                } else {
                    // merge with base path
                    std::string merged;
                    if (base_url->has_authority && base_url->path.empty()) {
                        merged = "/" + r->path;
                    } else {
                        const size_t last = base_url->path.rfind('/');
                        merged = (last == std::string::npos)
                                     ? r->path
                                     : base_url->path.substr(0, last + 1) + r->path;
                    }
                    target.path = remove_dot_segments(merged);
                }
                target.query = r->query;
                target.has_query = r->has_query;
            }
        }
    }
    return target.recompose(/*include_fragment=*/false);
}

}  // namespace aegis::url
