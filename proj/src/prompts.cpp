#include "elicit/prompts.hpp"

#include <sstream>

namespace elicit::prompts {

std::string analyst_system(const std::string& time_anchor) {
    return "You are an analyst who writes analytical documents on economics and "
           "international politics in English. Analyze the given topic in detail, "
           "grounding your discussion in concrete events and keeping in mind what "
           "causes what and what happens as a result. Note: it is currently " +
           time_anchor + ".";
}

std::string analyst_user(const std::string& topic_text) {
    return std::string(kAnalystUserPrefix) + " \"" + topic_text + "\".";
}

std::string extract_system() {
    return "You are a specialist at extracting \"meaningful events\" from English text.\n"
           "\n"
           "## Purpose\n"
           "From the input text, extract events such as incidents, judgments, policy "
           "changes, decisions made in meetings, changes in outlook, and recognition of "
           "risks.\n"
           "\n"
           "## Extraction rules\n"
           "- Each event should make clear what happened / was judged / was signaled.\n"
           "- If possible, include timing (e.g., 'Dec 2025 meeting'), actor (e.g., "
           "government and firm), and outcome (e.g., stocks rose, interest rates fell, "
           "sentiment deteriorated) in the event name.\n"
           "- Consolidate duplicates that describe the same content into a single item.\n"
           "\n"
           "## Output (list format only)\n"
           "Output a list consisting of English event names.";
}

std::string extract_user(const std::string& doc_text) {
    return std::string(kExtractUserPrefix) + "\n" + doc_text;
}

std::string name_system() {
    return "You are an editor who writes a representative text (event) for a cluster of "
           "policy/economic scenario sentences. Return exactly one English text (event) "
           "that represents the given examples, 10 words or fewer. Constraint: avoid "
           "meaningless cluster names such as 'Other'.";
}

std::string name_user(const std::vector<std::string>& examples) {
    std::ostringstream out;
    out << kNameUserPrefix << ", 10 words or fewer:\n";
    for (const auto& e : examples) out << "- " << e << "\n";
    return out.str();
}

std::string match_system() {
    return "You maintain a registry of canonical events. Decide whether the new event "
           "mention refers to the same underlying event as one of the candidate canonical "
           "events. Respond with JSON only, no other text: "
           "{\"match\": true|false, \"id\": <candidate id or -1>, "
           "\"name\": \"<updated canonical name, 10 words or fewer, or empty to keep>\"}.";
}

std::string match_user(const std::string& mention,
                       const std::vector<std::pair<int, std::string>>& candidates) {
    std::ostringstream out;
    out << kMatchUserPrefix << " \"" << mention << "\"\nCandidates:\n";
    for (const auto& [id, name] : candidates) out << "- id " << id << ": " << name << "\n";
    return out.str();
}

}  // namespace elicit::prompts
