#include "cove/prompts/prompts.hpp"

#include <fstream>
#include <sstream>

namespace cove::prompts {

std::string fill(std::string_view tmpl, const Slots& slots) {
    std::string out;
    out.reserve(tmpl.size());
    for (size_t i = 0; i < tmpl.size(); ++i) {
        const char c = tmpl[i];
        if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
            out.push_back('{');
            ++i;
        } else if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
            out.push_back('}');
            ++i;
        } else if (c == '{') {
            const auto close = tmpl.find('}', i);
            if (close == std::string_view::npos) throw ConfigError("unclosed placeholder in prompt template");
            const std::string key(tmpl.substr(i + 1, close - i - 1));
            auto it = slots.find(key);
            if (it == slots.end()) throw ConfigError("no value for prompt slot '" + key + "'");
            out += it->second;
            i = close;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

gateway::ChatPrompt PromptTemplate::render(const Slots& slots) const {
    gateway::ChatPrompt p;
    p.system = system;
    for (const auto& d : demonstrations) p.demonstrations.push_back({fill(instance, d.slots), d.answer});
    p.user = fill(instance, slots);
    return p;
}

PromptTemplate PromptTemplate::parse(std::string name, std::string_view json_text) {
    try {
        const Json j = Json::parse(json_text);
        PromptTemplate t;
        t.name = std::move(name);
        t.system = j.at("system").get<std::string>();
        t.instance = j.at("instance").get<std::string>();
        for (const auto& d : j.value("demonstrations", Json::array()))
            t.demonstrations.push_back({d.at("slots").get<Slots>(), d.at("answer").get<std::string>()});
        // Catch broken slots at load time rather than mid-run.
        for (const auto& d : t.demonstrations) (void)fill(t.instance, d.slots);
        return t;
    } catch (const Json::exception& e) {
        throw ConfigError("prompt asset '" + name + "': " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError("prompt asset '" + name + "': " + e.what());
    }
}

std::vector<std::string_view> required_prompts() {
    using namespace names;
    return {kContextQa,    kQuestionsDate,  kQuestionsLocation, kAnswerDate,
            kAnswerLocation, kValidateDate, kValidateLocation,  kVeracityWeb,
            kVeracityNoWeb, kDecompose,     kAccurateCaption};
}

PromptLibrary PromptLibrary::embedded() {
    PromptLibrary lib;
    for (auto name : required_prompts()) {
        auto text = embedded_asset(std::string(name) + ".json");
        if (!text) throw ConfigError("built-in prompt asset missing: " + std::string(name));
        lib.templates_.emplace(std::string(name), PromptTemplate::parse(std::string(name), *text));
    }
    return lib;
}

PromptLibrary PromptLibrary::with_overrides(const std::filesystem::path& dir) {
    PromptLibrary lib = embedded();
    if (!std::filesystem::is_directory(dir)) throw ConfigError("prompt directory not found: " + dir.string());
    for (auto name : required_prompts()) {
        const auto file = dir / (std::string(name) + ".json");
        if (!std::filesystem::exists(file)) continue;
        std::ifstream in(file, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        lib.templates_[std::string(name)] = PromptTemplate::parse(std::string(name), ss.str());
    }
    return lib;
}

const PromptTemplate& PromptLibrary::get(std::string_view name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw ConfigError("unknown prompt '" + std::string(name) + "'");
    return it->second;
}

bool PromptLibrary::contains(std::string_view name) const { return templates_.find(name) != templates_.end(); }

}  // namespace cove::prompts
