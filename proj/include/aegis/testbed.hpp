#pragma once

#include "aegis/agent_gateway.hpp"
#include "aegis/errors.hpp"
#include "aegis/eval_harness.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace aegis::testbed {

class ManifestInvalid : public PipelineError {
public:
    explicit ManifestInvalid(const std::string& message)
        : PipelineError("ManifestInvalid", message) {}
};

class PortInUse : public PipelineError {
public:
    explicit PortInUse(const std::string& message) : PipelineError("PortInUse", message) {}
};

struct AgentScript {
    std::string match_substring;
    std::vector<std::string> chunks;
    int chunk_delay_ms = 10;
    int stall_ms = 0;   // hold the stream open this long before closing
    int status = 200;   // non-200 short-circuits with that code
};

struct FormConfig {
    std::string confirmation_text = "Nomination received";
    bool suppress_confirmation = false;  // drives the TIMEOUT path
    bool add_author_broken = false;      // clicks do not add rows
    bool omit_add_author = false;        // control absent entirely
};

struct FixtureCorpus {
    // served path -> raw page bytes ({{base}} substituted at serve time)
    std::map<std::string, std::string> pages;
    std::map<std::string, int> ready_after_ms;  // per-path render delay
    std::vector<eval::GroundTruthLabel> labels;
    std::vector<AgentScript> agent_scripts;
    FormConfig form;

    static FixtureCorpus load(const std::filesystem::path& corpus_dir);
};

struct RequestLogEntry {
    std::string method;
    std::string path;
};

struct TestbedOptions {
    std::filesystem::path corpus_dir;
    int port = 0;  // 0 = any free port
    std::filesystem::path submissions_path;  // default: <corpus_dir>/received_submissions.jsonl
};

// Offline stand-in for everything outside the pipeline: proceedings pages,
// paper pages, a scriptable streaming agent endpoint, a nomination form that
// records submissions to disk, and a WebDriver-compatible remote end at /wd.
class Testbed {
public:
    explicit Testbed(TestbedOptions options);
    ~Testbed();

    Testbed(const Testbed&) = delete;
    Testbed& operator=(const Testbed&) = delete;

    int start();  // returns the bound port
    void stop();
    void wait();  // blocks until stop() (CLI mode)

    int port() const { return port_; }
    std::string base_url() const;
    std::string webdriver_url() const { return base_url() + "/wd"; }
    std::string agent_url() const { return base_url(); }
    std::string form_url() const { return base_url() + "/form"; }

    const FixtureCorpus& corpus() const;
    const std::filesystem::path& submissions_path() const;

    std::vector<RequestLogEntry> request_log() const;
    std::vector<std::string> scroll_log() const;
    void reset_logs();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace aegis::testbed
