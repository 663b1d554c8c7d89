#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cove/gateway/providers.hpp"

namespace cove::prompts {

using Slots = std::map<std::string, std::string>;

/// Replaces "{name}" placeholders. "{{" and "}}" produce literal braces.
/// Throws ConfigError on a placeholder without a value or an unclosed brace.
std::string fill(std::string_view tmpl, const Slots& slots);

struct DemoSpec {
    Slots slots;
    std::string answer;
};

/// A task description, an instance template with named slots, and few-shot
/// demonstrations rendered through the same template.
struct PromptTemplate {
    std::string name;
    std::string system;
    std::string instance;
    std::vector<DemoSpec> demonstrations;

    gateway::ChatPrompt render(const Slots& slots) const;

    /// Parses the JSON asset format {"system", "instance", "demonstrations": [{"slots", "answer"}]}.
    static PromptTemplate parse(std::string name, std::string_view json_text);
};

namespace names {
inline constexpr std::string_view kContextQa = "context_qa";
inline constexpr std::string_view kQuestionsDate = "kg_questions_date";
inline constexpr std::string_view kQuestionsLocation = "kg_questions_location";
inline constexpr std::string_view kAnswerDate = "kg_answer_date";
inline constexpr std::string_view kAnswerLocation = "kg_answer_location";
inline constexpr std::string_view kValidateDate = "kg_validate_date";
inline constexpr std::string_view kValidateLocation = "kg_validate_location";
inline constexpr std::string_view kVeracityWeb = "veracity_web";
inline constexpr std::string_view kVeracityNoWeb = "veracity_no_web";
inline constexpr std::string_view kDecompose = "decompose_caption";
inline constexpr std::string_view kAccurateCaption = "accurate_caption";
}  // namespace names

std::vector<std::string_view> required_prompts();

/// Set of prompt templates. Built-in assets are compiled into the library; a
/// directory of <name>.json files overrides them one by one.
class PromptLibrary {
public:
    static PromptLibrary embedded();
    static PromptLibrary with_overrides(const std::filesystem::path& dir);

    const PromptTemplate& get(std::string_view name) const;
    bool contains(std::string_view name) const;

private:
    std::map<std::string, PromptTemplate, std::less<>> templates_;
};

std::optional<std::string_view> embedded_asset(std::string_view file_name);

}  // namespace cove::prompts
