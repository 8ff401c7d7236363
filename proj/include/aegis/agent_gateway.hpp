#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aegis::agent {

struct AgentEndpoint {
    std::string base_url;
    std::string route = "/agent";
    double request_timeout_s = 30.0;     // connect + first byte
    double stream_idle_timeout_s = 30.0; // max silence between chunks
};

struct AgentTranscript {
    std::string prompt;
    std::string assembled_text;
    int event_count = 0;
    long duration_ms = 0;
    std::string backend;  // "live" or "offline"
};

class AgentError : public std::runtime_error {
public:
    enum class Kind { ConnectTimeout, StreamIdleTimeout, Http };

    AgentError(Kind kind, const std::string& message, int status = 0)
        : std::runtime_error(message), kind_(kind), status_(status) {}

    Kind kind() const { return kind_; }
    int status() const { return status_; }

private:
    Kind kind_;
    int status_;
};

class FixtureMissing : public std::runtime_error {
public:
    explicit FixtureMissing(const std::string& message) : std::runtime_error(message) {}
};

// Marker lists for the offline backend's geography decision.
struct KeywordConfig {
    std::vector<std::string> country_markers = {"India"};
    std::vector<std::string> institution_markers = {"Indian Institute of Technology", "IIT",
                                                    "IISc"};
};

using ChunkSink = std::function<void(std::string_view chunk)>;

// POST {"command": prompt} and assemble the chunked response in arrival
// order. The sink, when set, sees every chunk as it lands.
AgentTranscript invoke_agent(const AgentEndpoint& endpoint, const std::string& prompt,
                             const ChunkSink& sink = {});

struct RetryPolicy {
    int max_retries = 2;
    int backoff_base_ms = 250;
};

// invoke_agent with exponential backoff; rethrows the last error once the
// budget is spent.
AgentTranscript invoke_with_retry(const AgentEndpoint& endpoint, const std::string& prompt,
                                  const RetryPolicy& policy, const ChunkSink& sink = {});

// Source of fixture paper pages for the offline backend.
class FixtureStore {
public:
    virtual ~FixtureStore() = default;
    virtual std::optional<std::string> get(const std::string& absolute_url) const = 0;
};

// Plain GET of the url itself (the testbed serves the paper pages).
class HttpFixtureStore : public FixtureStore {
public:
    std::optional<std::string> get(const std::string& absolute_url) const override;
};

// Deterministic stand-in for the extraction agent: reads the paper page from
// the store and emits a transcript in the exact format the prompt templates
// demand. Pure in (page bytes, keyword config).
AgentTranscript offline_extract(const std::string& absolute_url, const FixtureStore& store,
                                const KeywordConfig& cfg);

// The pure core of the offline backend, also used by the testbed to
// synthesize default agent responses.
AgentTranscript extract_transcript(const std::string& page_html, const std::string& absolute_url,
                                   const KeywordConfig& cfg);

// Drops trailing superscript markers ("A. Kumar¹", "C. Dickens³,⁴") and
// asterisk footnotes from an author name.
std::string strip_superscript_markers(const std::string& name);

}  // namespace aegis::agent
