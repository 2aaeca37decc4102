#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace chemminer {

inline constexpr const char* kPromptVersion = "v1";

struct PromptTemplate {
    std::string instruction;
    std::vector<std::pair<std::string, std::string>> few_shot;  // input, output
    std::string output_contract;

    std::string render() const {
        std::string out = instruction;
        out += "\n\n";
        for (const auto& [in, expected] : few_shot) {
            out += "Example input:\n" + in + "\nExample output:\n" + expected +
                   "\n\n";
        }
        out += output_contract;
        return out;
    }
};

// The first line of each instruction doubles as the task marker the rule
// backend dispatches on.
inline const PromptTemplate& coref_text_prompt() {
    static const PromptTemplate t{
        "TASK coreference-identification " + std::string(kPromptVersion) +
            "\nYou are given one page of a chemistry paper. Identify every "
            "coreference label (a short number-letter token such as \"1b\") "
            "that this page defines as shorthand for a full molecule name. "
            "Ignore figure, table, scheme and section references.",
        {{"4-methylbenzaldehyde (1b) was dissolved in dry solvent.",
          "{\"1b\": \"4-methylbenzaldehyde\"}"}},
        "Respond with a single JSON object mapping each label to the full "
        "molecule name. Respond with {} when the page defines none."};
    return t;
}

inline const PromptTemplate& coref_multimodal_prompt() {
    static const PromptTemplate t{
        "TASK multimodal-coreference-identification " +
            std::string(kPromptVersion) +
            "\nYou are given a table (pipe-delimited rows) or a figure from a "
            "chemistry paper. Identify every coreference label the material "
            "defines as shorthand for a full molecule name. Directly named "
            "compounds are not coreferences.",
        {{"Label | Definition\n(i) | 2d = methyl 4-iodobenzoate",
          "{\"2d\": \"methyl 4-iodobenzoate\"}"}},
        "Respond with a single JSON object mapping each label to the full "
        "molecule name. Respond with {} when the material defines none."};
    return t;
}

inline const PromptTemplate& reaction_prompt() {
    static const PromptTemplate t{
        "TASK reaction-extraction " + std::string(kPromptVersion) +
            "\nYou are given the full text of a chemistry paper. Extract "
            "every chemical reaction it reports: reactants, catalyst, "
            "solvent, products, and yield. Keep coreference labels exactly "
            "as written; they are resolved later.",
        {{"1b and 2d gave 3b in 93% yield in THF.",
          "[{\"reactants\": [\"1b\", \"2d\"], \"catalyst\": null, "
          "\"solvent\": \"THF\", \"products\": [\"3b\"], \"yield\": "
          "\"93%\"}]"}},
        "Respond with a JSON array of reaction objects with keys reactants, "
        "catalyst, solvent, products, yield. Use null for unknown catalyst "
        "or solvent. Respond with [] when the text reports no reactions."};
    return t;
}

inline const PromptTemplate& revisit_prompt() {
    static const PromptTemplate t{
        "TASK coreference-revisit " + std::string(kPromptVersion) +
            "\nTwo sources disagree about which molecule a coreference label "
            "stands for. Decide which molecule the label denotes, using the "
            "two source contexts below.",
        {},
        "Respond with a single JSON object {\"molecule\": \"<full name>\"}."};
    return t;
}

// FNV-1a, used by tests to pin the shipped template texts.
inline std::uint64_t prompt_hash(const PromptTemplate& t) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : t.render()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace chemminer
