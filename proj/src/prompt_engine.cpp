#include "aegis/prompt_engine.hpp"

#include "aegis/errors.hpp"
#include "aegis/util.hpp"

#include <cstdlib>

namespace aegis::prompt {

namespace fs = std::filesystem;

TemplateLibrary TemplateLibrary::load_dir(const fs::path& dir) {
    TemplateLibrary library;
    if (!fs::is_directory(dir))
        throw ConfigError("prompt directory not found: " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        PromptTemplate tmpl;
        tmpl.key = entry.path().stem().string();
        std::string body = util::read_file(entry.path());
        // optional version header: first line `# v<N>`
        if (util::starts_with(body, "# v")) {
            const size_t eol = body.find('\n');
            const std::string header = body.substr(0, eol == std::string::npos ? body.size() : eol);
            tmpl.version = std::atoi(header.c_str() + 3);
            body = (eol == std::string::npos) ? std::string() : body.substr(eol + 1);
        }
        tmpl.body = std::move(body);
        library.add(std::move(tmpl));
    }
    return library;
}

void TemplateLibrary::add(PromptTemplate tmpl) {
    if (tmpl.body.find("{{url}}") == std::string::npos)
        throw ConfigError("template `" + tmpl.key + "` has no {{url}} placeholder");
    templates_[tmpl.key] = std::move(tmpl);
}

const PromptTemplate& TemplateLibrary::select(const std::string& conference_id,
                                              const std::string& publisher) const {
    for (const std::string& key :
         {"conference:" + conference_id, "publisher:" + publisher, std::string("generic")}) {
        const auto it = templates_.find(key);
        if (it != templates_.end()) return it->second;
    }
    throw MissingGenericTemplate("template library has no `generic` entry");
}

std::string render_prompt(const PromptTemplate& tmpl, const std::string& absolute_url) {
    return util::replace_all(tmpl.body, "{{url}}", absolute_url);
}

}  // namespace aegis::prompt
