#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace aegis::parser {

struct AuthorEntry {
    std::string name;
    std::string affiliation;

    bool operator==(const AuthorEntry&) const = default;
};

struct ExtractionRecord {
    std::string source_url;
    std::string title;
    std::vector<AuthorEntry> authors;
    std::vector<std::string> institutions;
    std::optional<std::string> research_area;
    std::optional<std::string> track_label;
    std::string conference;
    int year = 0;
    bool agent_claims_match = false;
    bool verified = false;
};

// Key-value pairs pulled from single lines of the transcript. Missing keys
// stay unset; downstream verification decides what that means.
struct ParsedFields {
    std::optional<std::string> title;
    std::optional<std::string> research_area;
    std::optional<bool> agent_claims_match;
};

// Result of the structured-block pass. stage 1 = JSON decode of the first
// fenced or brace-balanced region, stage 2 = regex reconstruction after a
// decode failure, stage 0 = nothing usable found.
struct StructuredBlock {
    std::vector<AuthorEntry> authors;
    std::vector<std::string> institutions;
    int stage = 0;
};

enum class RejectReason { EmptyAuthors, EmptyInstitutions, NullValue, MissingTitle };

struct Rejection {
    RejectReason reason;
    std::string detail;
};

const char* reject_reason_name(RejectReason reason);

ParsedFields parse_fields(const std::string& transcript);

StructuredBlock parse_structured_block(const std::string& transcript);

// Exposed for the fallback-consistency checks: runs the regex reconstruction
// unconditionally over the transcript.
StructuredBlock reconstruct_with_regex(const std::string& transcript);

// {"none", "null", "n/a", ""} after trim and case-fold.
bool is_null_token(const std::string& value);

std::variant<ExtractionRecord, Rejection> verify_record(ExtractionRecord record);

bool decide_positive(const ExtractionRecord& record);

// Record JSON as written per verified positive: source_url, title,
// authors[{name, affiliation}], institutions[], research_area, conference,
// year.
std::string record_to_json(const ExtractionRecord& record);
ExtractionRecord record_from_json(const std::string& json_text);

}  // namespace aegis::parser
