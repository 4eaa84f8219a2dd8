#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Prompt pairs used by the pipeline stages. The mock provider routes on the
// user-message prefixes below, so stages and mock stay in sync by sharing
// these builders.
namespace elicit::prompts {

inline constexpr std::string_view kAnalystUserPrefix =
    "Create an analytical document in English analyzing:";
inline constexpr std::string_view kExtractUserPrefix =
    "Extract important events from the following text.";
inline constexpr std::string_view kNameUserPrefix =
    "Create exactly one English text (event) that represents the following examples";
inline constexpr std::string_view kMatchUserPrefix =
    "New mention:";

std::string analyst_system(const std::string& time_anchor);
std::string analyst_user(const std::string& topic_text);

std::string extract_system();
std::string extract_user(const std::string& doc_text);

std::string name_system();
std::string name_user(const std::vector<std::string>& examples);

std::string match_system();
std::string match_user(const std::string& mention,
                       const std::vector<std::pair<int, std::string>>& candidates);

}  // namespace elicit::prompts
