#include "aegis/html.hpp"

#include "aegis/util.hpp"

#include <array>
#include <cctype>
#include <cstdint>

namespace aegis::html {

namespace {

bool is_void_element(std::string_view tag) {
    static const std::array<std::string_view, 14> kVoid = {
        "area", "base", "br",    "col",  "embed",  "hr",    "img",
        "input", "link", "meta", "param", "source", "track", "wbr"};
    for (auto v : kVoid)
        if (tag == v) return true;
    return false;
}

bool is_raw_text_element(std::string_view tag) { return tag == "script" || tag == "style"; }

bool is_block_element(std::string_view tag) {
    static const std::array<std::string_view, 16> kBlock = {
        "address", "article", "aside", "blockquote", "div", "dl",      "fieldset", "footer",
        "h1",      "h2",      "h3",    "h4",         "h5",  "h6",      "header",   "section"};
    for (auto v : kBlock)
        if (tag == v) return true;
    return tag == "p" || tag == "ul" || tag == "ol" || tag == "table" || tag == "li" ||
           tag == "form" || tag == "pre" || tag == "main" || tag == "nav";
}

void append_utf8(std::string& out, uint32_t cp) {
    if (cp <= 0x7f) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7ff) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp <= 0xffff) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp <= 0x10ffff) {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

struct Parser {
    std::string_view src;
    size_t pos = 0;

    explicit Parser(std::string_view s) : src(s) {}

    bool eof() const { return pos >= src.size(); }
    char peek(size_t off = 0) const { return pos + off < src.size() ? src[pos + off] : '\0'; }

    Document run() {
        Document doc;
        doc.root = std::make_unique<Node>();
        std::vector<Node*> stack{doc.root.get()};

        std::string pending_text;
        auto flush_text = [&]() {
            if (pending_text.empty()) return;
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::Text;
            node->text = decode_entities(pending_text);
            node->parent = stack.back();
            stack.back()->children.push_back(std::move(node));
            pending_text.clear();
        };

        while (!eof()) {
            if (peek() != '<') {
                pending_text.push_back(src[pos++]);
                continue;
            }
            // '<' — decide whether this opens markup or is literal text
            const char next = peek(1);
            if (next == '!') {
                flush_text();
                skip_declaration();
                continue;
            }
            if (next == '?') {
                flush_text();
                skip_until('>');
                continue;
            }
            if (next == '/') {
                flush_text();
                handle_close_tag(stack);
                continue;
            }
            if (!std::isalpha(static_cast<unsigned char>(next))) {
                pending_text.push_back(src[pos++]);  // bogus '<', keep as text
                continue;
            }
            flush_text();
            handle_open_tag(stack);
        }
        flush_text();
        return doc;
    }

    void skip_until(char c) {
        while (!eof() && src[pos] != c) ++pos;
        if (!eof()) ++pos;
    }

    void skip_declaration() {
        // <!-- comment -->, <!DOCTYPE ...>, <![CDATA[...]]>
        if (src.substr(pos, 4) == "<!--") {
            const size_t end = src.find("-->", pos + 4);
            pos = (end == std::string_view::npos) ? src.size() : end + 3;
            return;
        }
        if (src.substr(pos, 9) == "<![CDATA[") {
            const size_t end = src.find("]]>", pos + 9);
            pos = (end == std::string_view::npos) ? src.size() : end + 3;
            return;
        }
        skip_until('>');
    }

    std::string read_tag_name() {
        std::string name;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':') {
                name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
                ++pos;
            } else {
                break;
            }
        }
        return name;
    }

    void read_attrs(Node& node, bool& self_closing) {
        self_closing = false;
        while (!eof()) {
            while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
            if (eof()) return;
            if (peek() == '>') {
                ++pos;
                return;
            }
            if (peek() == '/') {
                ++pos;
                if (peek() == '>') {
                    ++pos;
                    self_closing = true;
                    return;
                }
                continue;
            }
            // attribute name
            std::string name;
            while (!eof()) {
                const char c = peek();
                if (c == '=' || c == '>' || c == '/' ||
                    std::isspace(static_cast<unsigned char>(c)))
                    break;
                name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
                ++pos;
            }
            while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
            std::string value;
            if (peek() == '=') {
                ++pos;
                while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
                if (peek() == '"' || peek() == '\'') {
                    const char quote = peek();
                    ++pos;
                    while (!eof() && peek() != quote) value.push_back(src[pos++]);
                    if (!eof()) ++pos;
                } else {
                    while (!eof()) {
                        const char c = peek();
                        if (c == '>' || std::isspace(static_cast<unsigned char>(c))) break;
                        value.push_back(src[pos++]);
                    }
                }
            }
            if (!name.empty()) node.attrs.emplace(std::move(name), decode_entities(value));
        }
    }

    // Implicit-close rules for the tags proceedings pages actually misuse.
    static void implicit_close(std::vector<Node*>& stack, std::string_view incoming) {
        Node* top = stack.back();
        if (top->kind != Node::Kind::Element) return;
        const std::string& open = top->tag;
        const bool close =
            (open == "li" && incoming == "li") ||
            (open == "p" && is_block_element(incoming)) ||
            (open == "option" && (incoming == "option" || incoming == "optgroup")) ||
            ((open == "td" || open == "th") &&
             (incoming == "td" || incoming == "th" || incoming == "tr")) ||
            (open == "tr" && incoming == "tr") ||
            (open == "dt" && (incoming == "dt" || incoming == "dd")) ||
            (open == "dd" && (incoming == "dt" || incoming == "dd"));
        if (close && stack.size() > 1) stack.pop_back();
    }

    void handle_open_tag(std::vector<Node*>& stack) {
        ++pos;  // consume '<'
        const std::string tag = read_tag_name();
        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::Element;
        node->tag = tag;
        bool self_closing = false;
        read_attrs(*node, self_closing);

        implicit_close(stack, tag);

        Node* raw = node.get();
        raw->parent = stack.back();
        stack.back()->children.push_back(std::move(node));

        if (self_closing || is_void_element(tag)) return;

        if (is_raw_text_element(tag)) {
            // consume verbatim up to the matching close tag
            const std::string close = "</" + tag;
            size_t end = pos;
            while (true) {
                end = src.find('<', end);
                if (end == std::string_view::npos) {
                    end = src.size();
                    break;
                }
                if (util::iequals(src.substr(end, close.size()), close)) break;
                ++end;
            }
            if (end > pos) {
                auto text = std::make_unique<Node>();
                text->kind = Node::Kind::Text;
                text->text = std::string(src.substr(pos, end - pos));
                text->parent = raw;
                raw->children.push_back(std::move(text));
            }
            pos = end;
            if (!eof()) skip_until('>');
            return;
        }
        stack.push_back(raw);
    }

    void handle_close_tag(std::vector<Node*>& stack) {
        pos += 2;  // consume '</'
        const std::string tag = read_tag_name();
        skip_until('>');
        // close the nearest matching ancestor; ignore when unmatched
        for (size_t i = stack.size(); i-- > 1;) {
            if (stack[i]->is_element(tag)) {
                stack.resize(i);
                return;
            }
        }
    }
};

void collect_text(const Node& node, const std::vector<std::string>& skip_tags, std::string& out) {
    if (node.kind == Node::Kind::Text) {
        out += node.text;
        return;
    }
    if (node.kind == Node::Kind::Element) {
        for (const auto& skip : skip_tags)
            if (node.tag == skip) return;
        if (is_raw_text_element(node.tag)) return;
        if (node.tag == "br") out += ' ';
    }
    for (const auto& child : node.children) collect_text(*child, skip_tags, out);
    if (node.kind == Node::Kind::Element && is_block_element(node.tag)) out += ' ';
}

}  // namespace

bool Node::has_class(std::string_view cls) const {
    const auto it = attrs.find("class");
    if (it == attrs.end()) return false;
    for (const auto& token : util::split(it->second, ' '))
        if (token == cls) return true;
    return false;
}

int Node::heading_level() const {
    if (kind != Kind::Element || tag.size() != 2 || tag[0] != 'h') return 0;
    if (tag[1] >= '1' && tag[1] <= '6') return tag[1] - '0';
    return 0;
}

std::string decode_entities(std::string_view input) {
    if (input.find('&') == std::string_view::npos) return std::string(input);
    std::string out;
    out.reserve(input.size());
    size_t i = 0;
    while (i < input.size()) {
        if (input[i] != '&') {
            out.push_back(input[i++]);
            continue;
        }
        const size_t semi = input.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back(input[i++]);
            continue;
        }
        const std::string_view name = input.substr(i + 1, semi - i - 1);
        if (name == "amp") {
            out.push_back('&');
        } else if (name == "lt") {
            out.push_back('<');
        } else if (name == "gt") {
            out.push_back('>');
        } else if (name == "quot") {
            out.push_back('"');
        } else if (name == "apos") {
            out.push_back('\'');
        } else if (name == "nbsp") {
            out.push_back(' ');
        } else if (!name.empty() && name[0] == '#') {
            uint32_t cp = 0;
            bool ok = false;
            if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X')) {
                for (size_t k = 2; k < name.size(); ++k) {
                    const char c = name[k];
                    uint32_t d;
                    if (c >= '0' && c <= '9')
                        d = static_cast<uint32_t>(c - '0');
                    else if (c >= 'a' && c <= 'f')
                        d = static_cast<uint32_t>(c - 'a' + 10);
                    else if (c >= 'A' && c <= 'F')
                        d = static_cast<uint32_t>(c - 'A' + 10);
                    else {
                        ok = false;
                        break;
                    }
                    cp = cp * 16 + d;
                    ok = true;
                }
            } else {
                for (size_t k = 1; k < name.size(); ++k) {
                    if (!std::isdigit(static_cast<unsigned char>(name[k]))) {
                        ok = false;
                        break;
                    }
                    cp = cp * 10 + static_cast<uint32_t>(name[k] - '0');
                    ok = true;
                }
            }
            if (ok && cp > 0) {
                append_utf8(out, cp);
            } else {
                out.append(input.substr(i, semi - i + 1));
            }
        } else {
            out.append(input.substr(i, semi - i + 1));
        }
        i = semi + 1;
    }
    return out;
}

Document parse(std::string_view input) {
    Parser parser(input);
    return parser.run();
}

void for_each_element(const Node& root, const std::function<void(const Node&)>& fn) {
    if (root.kind == Node::Kind::Element) fn(root);
    for (const auto& child : root.children) for_each_element(*child, fn);
}

std::string inner_text(const Node& node, const std::vector<std::string>& skip_tags) {
    std::string out;
    collect_text(node, skip_tags, out);
    return util::collapse_ws(out);
}

const Node* first_element_with_class(const Node& root, std::string_view tag,
                                     std::string_view cls) {
    const Node* found = nullptr;
    for_each_element(root, [&](const Node& n) {
        if (found) return;
        if (!tag.empty() && n.tag != tag) return;
        if (n.has_class(cls)) found = &n;
    });
    return found;
}

std::vector<const Node*> elements_with_class(const Node& root, std::string_view tag,
                                             std::string_view cls) {
    std::vector<const Node*> out;
    for_each_element(root, [&](const Node& n) {
        if (!tag.empty() && n.tag != tag) return;
        if (n.has_class(cls)) out.push_back(&n);
    });
    return out;
}

const Node* first_element(const Node& root, std::string_view tag) {
    const Node* found = nullptr;
    for_each_element(root, [&](const Node& n) {
        if (!found && n.tag == tag) found = &n;
    });
    return found;
}

const Node* element_by_id(const Node& root, std::string_view id) {
    const Node* found = nullptr;
    for_each_element(root, [&](const Node& n) {
        if (!found && n.attr("id") == id) found = &n;
    });
    return found;
}

}  // namespace aegis::html
