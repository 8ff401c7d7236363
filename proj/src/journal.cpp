#include "aegis/journal.hpp"

#include "aegis/errors.hpp"
#include "aegis/util.hpp"

#include <nlohmann/json.hpp>

namespace aegis::journal {

const char* state_name(UrlState state) {
    switch (state) {
        case UrlState::Pending: return "PENDING";
        case UrlState::Extracted: return "EXTRACTED";
        case UrlState::Positive: return "POSITIVE";
        case UrlState::Negative: return "NEGATIVE";
        case UrlState::Failed: return "FAILED";
        case UrlState::Submitted: return "SUBMITTED";
        case UrlState::Skipped: return "SKIPPED";
    }
    return "UNKNOWN";
}

std::optional<UrlState> state_from_name(const std::string& name) {
    for (UrlState s : {UrlState::Pending, UrlState::Extracted, UrlState::Positive,
                       UrlState::Negative, UrlState::Failed, UrlState::Submitted,
                       UrlState::Skipped})
        if (name == state_name(s)) return s;
    return std::nullopt;
}

bool is_terminal(UrlState state) {
    return state == UrlState::Negative || state == UrlState::Submitted;
}

bool transition_allowed(UrlState from, UrlState to) {
    if (from == to) return true;
    switch (from) {
        case UrlState::Pending:
            return to == UrlState::Extracted || to == UrlState::Failed;
        case UrlState::Extracted:
            return to == UrlState::Positive || to == UrlState::Negative ||
                   to == UrlState::Failed;
        case UrlState::Positive:
            return to == UrlState::Submitted;
        case UrlState::Failed:
            return to == UrlState::Pending;
        case UrlState::Negative:
        case UrlState::Submitted:
        case UrlState::Skipped:
            return false;
    }
    return false;
}

RunJournal::RunJournal(std::filesystem::path path) : path_(std::move(path)) { load(); }

void RunJournal::load() {
    const auto content = util::read_file_if_exists(path_);
    if (!content) return;
    for (const auto& line : util::split(*content, '\n')) {
        if (util::trim(line).empty()) continue;
        const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (!j.is_object()) continue;  // torn trailing line from a killed run
        const auto state = state_from_name(j.value("state", std::string()));
        const std::string url = j.value("url", std::string());
        if (!state || url.empty()) continue;
        states_[url] = *state;
    }
}

void RunJournal::record(const std::string& url, UrlState state, const std::string& note) {
    const auto it = states_.find(url);
    if (it != states_.end() && !transition_allowed(it->second, state))
        throw PipelineError("JournalTransition",
                            std::string("illegal transition ") + state_name(it->second) + " -> " +
                                state_name(state) + " for " + url);
    nlohmann::json j{{"url", url}, {"state", state_name(state)}, {"ts", util::rfc3339_now()}};
    if (!note.empty()) j["note"] = note;
    util::append_line(path_, j.dump());
    states_[url] = state;
}

std::optional<UrlState> RunJournal::state_of(const std::string& url) const {
    const auto it = states_.find(url);
    if (it == states_.end()) return std::nullopt;
    return it->second;
}

std::map<UrlState, int> RunJournal::counts() const {
    std::map<UrlState, int> out;
    for (const auto& [url, state] : states_) ++out[state];
    return out;
}

bool RunJournal::any_failed() const {
    for (const auto& [url, state] : states_)
        if (state == UrlState::Failed) return true;
    return false;
}

}  // namespace aegis::journal
