#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace aegis::journal {

enum class UrlState { Pending, Extracted, Positive, Negative, Failed, Submitted, Skipped };

const char* state_name(UrlState state);
std::optional<UrlState> state_from_name(const std::string& name);

// Terminal states are never re-entered on resume.
bool is_terminal(UrlState state);

// Legal transition along PENDING -> EXTRACTED -> {POSITIVE -> SUBMITTED |
// NEGATIVE}, with FAILED re-enterable to PENDING.
bool transition_allowed(UrlState from, UrlState to);

// Append-only JSONL ({url, state, ts, note?} per line) with last-write-wins
// per url. Each append is flushed before returning so a killed run never
// loses committed transitions.
class RunJournal {
public:
    explicit RunJournal(std::filesystem::path path);

    void record(const std::string& url, UrlState state, const std::string& note = "");
    std::optional<UrlState> state_of(const std::string& url) const;
    const std::map<std::string, UrlState>& states() const { return states_; }

    std::map<UrlState, int> counts() const;
    bool any_failed() const;

    const std::filesystem::path& path() const { return path_; }

private:
    void load();

    std::filesystem::path path_;
    std::map<std::string, UrlState> states_;
};

}  // namespace aegis::journal
