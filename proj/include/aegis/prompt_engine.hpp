#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace aegis::prompt {

// Keys follow the specificity chain: "conference:<id>", "publisher:<name>",
// "generic". The body must mention {{url}} at least once.
struct PromptTemplate {
    std::string key;
    std::string body;
    int version = 1;
};

class TemplateLibrary {
public:
    static TemplateLibrary load_dir(const std::filesystem::path& dir);

    void add(PromptTemplate tmpl);
    bool contains(const std::string& key) const { return templates_.count(key) > 0; }
    size_t size() const { return templates_.size(); }

    // First existing key among conference:<id>, publisher:<name>, generic.
    // Throws MissingGenericTemplate when the chain bottoms out empty.
    const PromptTemplate& select(const std::string& conference_id,
                                 const std::string& publisher) const;

private:
    std::map<std::string, PromptTemplate> templates_;
};

// Replaces every {{url}} occurrence; single braces are left untouched.
std::string render_prompt(const PromptTemplate& tmpl, const std::string& absolute_url);

}  // namespace aegis::prompt
