#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace aegis::url {

// Decomposed URL. `authority` keeps host:port verbatim apart from case
// normalization on the host.
struct Url {
    std::string scheme;
    std::string authority;
    std::string path;
    std::string query;     // without '?'
    std::string fragment;  // without '#'
    bool has_authority = false;
    bool has_query = false;
    bool has_fragment = false;

    std::string recompose(bool include_fragment = true) const;
};

std::optional<Url> parse(std::string_view input);

bool is_absolute_http(std::string_view input);

// Standard reference resolution of `ref` against absolute `base`.
// Returns the recomposed target without its fragment part.
// nullopt when `base` is not an absolute URL.
std::optional<std::string> resolve(std::string_view base, std::string_view ref);

std::string remove_dot_segments(std::string_view path);

}  // namespace aegis::url
