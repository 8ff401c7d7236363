#include "aegis/response_parser.hpp"

#include "aegis/util.hpp"

#include <nlohmann/json.hpp>

#include <regex>

namespace aegis::parser {

namespace {

using util::trim;

std::vector<std::string> transcript_lines(const std::string& transcript) {
    auto lines = util::split(transcript, '\n');
    for (auto& line : lines)
        if (!line.empty() && line.back() == '\r') line.pop_back();
    return lines;
}

// Returns the content of the first fenced block, or the first brace-balanced
// region, or empty when neither exists. The balance scan is string-aware so
// braces inside values do not derail it.
std::string locate_json_region(const std::string& transcript) {
    const size_t fence = transcript.find("```");
    if (fence != std::string::npos) {
        size_t body = transcript.find('\n', fence + 3);
        if (body == std::string::npos) return "";
        ++body;
        const size_t close = transcript.find("```", body);
        return transcript.substr(body, close == std::string::npos ? std::string::npos
                                                                  : close - body);
    }
    const size_t open = transcript.find('{');
    if (open == std::string::npos) return "";
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (size_t i = open; i < transcript.size(); ++i) {
        const char c = transcript[i];
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return transcript.substr(open, i - open + 1);
        }
    }
    return transcript.substr(open);  // unbalanced tail; stage 1 will fail on it
}

bool decode_json_block(const std::string& region, StructuredBlock& out) {
    const auto j = nlohmann::json::parse(region, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) return false;
    if (const auto it = j.find("authors"); it != j.end() && it->is_array()) {
        for (const auto& entry : *it) {
            if (!entry.is_object()) continue;
            AuthorEntry author;
            if (const auto n = entry.find("name"); n != entry.end() && n->is_string())
                author.name = n->get<std::string>();
            if (const auto a = entry.find("affiliation"); a != entry.end() && a->is_string())
                author.affiliation = a->get<std::string>();
            out.authors.push_back(std::move(author));
        }
    }
    if (const auto it = j.find("institutions"); it != j.end() && it->is_array()) {
        for (const auto& entry : *it)
            if (entry.is_string()) out.institutions.push_back(entry.get<std::string>());
    }
    return true;
}

// Quoted-string scan used by the institutions reconstruction; stops at the
// closing bracket or end of text (truncated transcripts).
std::vector<std::string> scan_string_items(const std::string& text, size_t from) {
    std::vector<std::string> items;
    size_t i = from;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            ++i;
            continue;
        }
        if (c == ']') break;
        if (c == '"' || c == '\'') {
            const char quote = c;
            std::string item;
            ++i;
            bool escaped = false;
            while (i < text.size()) {
                const char d = text[i];
                if (escaped) {
                    item.push_back(d);
                    escaped = false;
                } else if (d == '\\') {
                    escaped = true;
                } else if (d == quote) {
                    break;
                } else {
                    item.push_back(d);
                }
                ++i;
            }
            if (i < text.size()) ++i;  // closing quote
            items.push_back(std::move(item));
            continue;
        }
        break;  // anything else means we have left the array
    }
    return items;
}

}  // namespace

const char* reject_reason_name(RejectReason reason) {
    switch (reason) {
        case RejectReason::EmptyAuthors: return "EMPTY_AUTHORS";
        case RejectReason::EmptyInstitutions: return "EMPTY_INSTITUTIONS";
        case RejectReason::NullValue: return "NULL_VALUE";
        case RejectReason::MissingTitle: return "MISSING_TITLE";
    }
    return "UNKNOWN";
}

ParsedFields parse_fields(const std::string& transcript) {
    static const std::regex title_re(R"(^\s*Paper Title:\s*(.+)$)", std::regex::icase);
    static const std::regex area_re(R"(^\s*Research Area:\s*(.+)$)", std::regex::icase);
    static const std::regex match_re(R"(^\s*India Affiliation:\s*(YES|NO)\s*$)",
                                     std::regex::icase);
    ParsedFields fields;
    for (const auto& line : transcript_lines(transcript)) {
        std::smatch m;
        if (!fields.title && std::regex_match(line, m, title_re)) {
            fields.title = trim(m[1].str());
        } else if (!fields.research_area && std::regex_match(line, m, area_re)) {
            fields.research_area = trim(m[1].str());
        } else if (!fields.agent_claims_match && std::regex_match(line, m, match_re)) {
            fields.agent_claims_match = util::iequals(m[1].str(), "yes");
        }
    }
    return fields;
}

StructuredBlock reconstruct_with_regex(const std::string& transcript) {
    // Tolerates single-quoted keys/values on top of the canonical
    // double-quoted form, which covers the usual LLM formatting slips.
    static const std::regex name_re(R"(["']name["']\s*:\s*["']([^"']*)["'])");
    static const std::regex aff_re(R"(["']affiliation["']\s*:\s*["']([^"']*)["'])");
    static const std::regex inst_re(R"(["']institutions["']\s*:\s*\[)");

    StructuredBlock block;
    struct Hit {
        size_t pos;
        bool is_name;
        std::string value;
    };
    std::vector<Hit> hits;
    auto collect = [&](const std::regex& re, bool is_name) {
        auto begin = std::sregex_iterator(transcript.begin(), transcript.end(), re);
        for (auto it = begin; it != std::sregex_iterator(); ++it)
            hits.push_back({static_cast<size_t>(it->position(0)), is_name, (*it)[1].str()});
    };
    collect(name_re, true);
    collect(aff_re, false);
    std::sort(hits.begin(), hits.end(),
              [](const Hit& a, const Hit& b) { return a.pos < b.pos; });

    // Names open author entries in order; each affiliation attaches to the
    // most recent entry still lacking one.
    for (const auto& hit : hits) {
        if (hit.is_name) {
            block.authors.push_back({hit.value, ""});
        } else if (!block.authors.empty() && block.authors.back().affiliation.empty()) {
            block.authors.back().affiliation = hit.value;
        }
    }

    std::smatch m;
    if (std::regex_search(transcript, m, inst_re)) {
        const size_t from = static_cast<size_t>(m.position(0) + m.length(0));
        block.institutions = scan_string_items(transcript, from);
    }
    block.stage = (block.authors.empty() && block.institutions.empty()) ? 0 : 2;
    return block;
}

StructuredBlock parse_structured_block(const std::string& transcript) {
    const std::string region = locate_json_region(transcript);
    if (!region.empty()) {
        StructuredBlock block;
        if (decode_json_block(region, block)) {
            block.stage = 1;
            return block;
        }
    }
    return reconstruct_with_regex(transcript);
}

bool is_null_token(const std::string& value) {
    const std::string folded = util::to_lower(trim(value));
    return folded.empty() || folded == "none" || folded == "null" || folded == "n/a";
}

std::variant<ExtractionRecord, Rejection> verify_record(ExtractionRecord record) {
    record.verified = false;
    if (record.authors.empty())
        return Rejection{RejectReason::EmptyAuthors, "no authors extracted"};
    if (record.institutions.empty())
        return Rejection{RejectReason::EmptyInstitutions, "no institutions extracted"};
    if (trim(record.title).empty())
        return Rejection{RejectReason::MissingTitle, "title missing or empty"};
    if (is_null_token(record.title))
        return Rejection{RejectReason::NullValue, "title is a null token: " + record.title};
    for (const auto& author : record.authors)
        if (is_null_token(author.name))
            return Rejection{RejectReason::NullValue, "author name is a null token"};
    for (const auto& institution : record.institutions)
        if (is_null_token(institution))
            return Rejection{RejectReason::NullValue,
                             "institution is a null token: " + institution};
    record.verified = true;
    return record;
}

bool decide_positive(const ExtractionRecord& record) {
    return record.agent_claims_match && record.verified;
}

std::string record_to_json(const ExtractionRecord& record) {
    nlohmann::json j;
    j["source_url"] = record.source_url;
    j["title"] = record.title;
    auto authors = nlohmann::json::array();
    for (const auto& a : record.authors)
        authors.push_back({{"name", a.name}, {"affiliation", a.affiliation}});
    j["authors"] = std::move(authors);
    j["institutions"] = record.institutions;
    j["research_area"] = record.research_area.value_or("Unspecified");
    j["conference"] = record.conference;
    j["year"] = record.year;
    return j.dump(2);
}

ExtractionRecord record_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    ExtractionRecord record;
    record.source_url = j.at("source_url").get<std::string>();
    record.title = j.at("title").get<std::string>();
    for (const auto& a : j.at("authors"))
        record.authors.push_back({a.at("name").get<std::string>(),
                                  a.value("affiliation", std::string())});
    record.institutions = j.at("institutions").get<std::vector<std::string>>();
    if (j.contains("research_area") && j["research_area"].is_string())
        record.research_area = j["research_area"].get<std::string>();
    record.conference = j.value("conference", std::string());
    record.year = j.value("year", 0);
    record.agent_claims_match = true;  // records are only written for positives
    record.verified = true;
    return record;
}

}  // namespace aegis::parser
