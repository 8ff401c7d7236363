#pragma once

#include <stdexcept>
#include <string>

namespace aegis {

// Base for every pipeline error that should abort a stage with context.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class NavigationTimeout : public PipelineError {
public:
    explicit NavigationTimeout(const std::string& message)
        : PipelineError("NavigationTimeout", message) {}
};

class CacheWriteError : public PipelineError {
public:
    explicit CacheWriteError(const std::string& message)
        : PipelineError("CacheWriteError", message) {}
};

class UnknownConference : public PipelineError {
public:
    explicit UnknownConference(const std::string& message)
        : PipelineError("UnknownConference", message) {}
};

class NoTracksFound : public PipelineError {
public:
    explicit NoTracksFound(const std::string& message)
        : PipelineError("NoTracksFound", message) {}
};

class EmptySelection : public PipelineError {
public:
    explicit EmptySelection(const std::string& message)
        : PipelineError("EmptySelection", message) {}
};

class MissingGenericTemplate : public PipelineError {
public:
    explicit MissingGenericTemplate(const std::string& message)
        : PipelineError("MissingGenericTemplate", message) {}
};

class ConfigError : public PipelineError {
public:
    explicit ConfigError(const std::string& message)
        : PipelineError("ConfigError", message) {}
};

}  // namespace aegis
