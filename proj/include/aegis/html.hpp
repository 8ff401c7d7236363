#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace aegis::html {

// Minimal DOM for proceedings pages. The parser repairs malformed markup
// instead of rejecting it: stray close tags are dropped, unclosed elements
// are closed at end of input, and common implicit-close rules (li, p, td...)
// are applied.
struct Node {
    enum class Kind { Document, Element, Text };

    Kind kind = Kind::Document;
    std::string tag;                           // lowercase; empty for text/document
    std::map<std::string, std::string> attrs;  // lowercase names
    std::string text;                          // decoded; text nodes only
    Node* parent = nullptr;
    std::vector<std::unique_ptr<Node>> children;

    bool is_element(std::string_view name) const {
        return kind == Kind::Element && tag == name;
    }
    std::string attr(const std::string& name) const {
        auto it = attrs.find(name);
        return it == attrs.end() ? std::string() : it->second;
    }
    bool has_attr(const std::string& name) const { return attrs.count(name) > 0; }
    bool has_class(std::string_view cls) const;

    // 1..6 for h1..h6, 0 otherwise.
    int heading_level() const;
};

struct Document {
    std::unique_ptr<Node> root;
};

Document parse(std::string_view input);

std::string decode_entities(std::string_view input);

// Depth-first, document-order walk over element nodes.
void for_each_element(const Node& root, const std::function<void(const Node&)>& fn);

// Concatenated text content, whitespace-collapsed. Subtrees rooted at tags in
// `skip_tags` are omitted (e.g. {"sup"} to drop superscript markers).
std::string inner_text(const Node& node, const std::vector<std::string>& skip_tags = {});

const Node* first_element_with_class(const Node& root, std::string_view tag,
                                     std::string_view cls);
std::vector<const Node*> elements_with_class(const Node& root, std::string_view tag,
                                             std::string_view cls);
const Node* first_element(const Node& root, std::string_view tag);
const Node* element_by_id(const Node& root, std::string_view id);

}  // namespace aegis::html
