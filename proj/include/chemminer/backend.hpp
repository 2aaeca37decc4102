#pragma once

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "chemminer/coref_dict.hpp"
#include "chemminer/prompts.hpp"
#include "chemminer/text_util.hpp"

namespace chemminer {

struct Attachment {
    std::string format_tag;   // "png", "jpeg", ...
    std::string base64_data;
};

struct BackendResult {
    std::string text;
    std::string error;  // non-empty on transport failure

    bool ok() const { return error.empty(); }
};

// chars/4 heuristic; override via config where a backend reports real counts.
inline std::size_t estimate_tokens(const std::string& s) {
    return s.size() / 4;
}

class ExtractionBackend {
public:
    virtual ~ExtractionBackend() = default;

    BackendResult submit(const std::string& prompt, const std::string& content,
                         std::size_t token_budget,
                         const std::vector<Attachment>& attachments = {}) {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return do_submit(prompt, content, token_budget, attachments);
    }

    virtual std::size_t context_limit() const = 0;
    virtual bool multimodal() const { return false; }

    std::size_t call_count() const {
        return calls_.load(std::memory_order_relaxed);
    }

protected:
    virtual BackendResult do_submit(const std::string& prompt,
                                    const std::string& content,
                                    std::size_t token_budget,
                                    const std::vector<Attachment>& attachments) = 0;

private:
    std::atomic<std::size_t> calls_{0};
};

inline const std::vector<std::string>& solvent_lexicon() {
    static const std::vector<std::string> lex = {
        "THF", "DMF", "DMSO", "toluene", "dioxane", "MeCN", "EtOH", "water"};
    return lex;
}

// Deterministic pattern-based test double standing in for a hosted model.
// Dispatches on the TASK marker in the prompt; every answer is a pure
// function of (prompt, content).
class RuleBackend : public ExtractionBackend {
public:
    explicit RuleBackend(std::size_t context_limit = 128000)
        : context_limit_(context_limit) {}

    std::size_t context_limit() const override { return context_limit_; }

protected:
    BackendResult do_submit(const std::string& prompt,
                            const std::string& content, std::size_t,
                            const std::vector<Attachment>&) override {
        if (prompt.find("TASK coreference-identification") == 0 ||
            prompt.find("TASK multimodal-coreference-identification") == 0)
            return {extract_corefs(content), ""};
        if (prompt.find("TASK reaction-extraction") == 0)
            return {extract_reactions(content), ""};
        if (prompt.find("TASK coreference-revisit") == 0)
            return {answer_revisit(content), ""};
        return {"", "rule backend: unknown task marker"};
    }

private:
    static bool name_stopword(const std::string& t) {
        static const std::set<std::string> stop = {
            "the",  "a",       "an",      "of",        "product",  "compound",
            "was",  "were",    "to",      "and",       "in",       "with",
            "as",   "reaction", "item",   "substrate", "catalyst", "from",
            "by",   "for",     "or",     "gave",      "afforded", "obtained",
            "isolated", "added", "solution", "intermediate", "|"};
        return stop.count(to_lower(t)) > 0;
    }

    // Name run: up to 4 adjacent non-stopword tokens whose join is long
    // enough and carries a digit or hyphen, as chemical names do.
    static std::string name_run(const std::vector<std::string>& toks,
                                std::size_t end_exclusive, bool backwards) {
        std::vector<std::string> run;
        if (backwards) {
            std::size_t i = end_exclusive;
            while (i > 0 && run.size() < 4) {
                std::string t = strip_token(toks[i - 1]);
                if (t.empty() || name_stopword(toks[i - 1]) ||
                    is_coref_label(t))
                    break;
                run.insert(run.begin(), t);
                --i;
            }
        } else {
            std::size_t i = end_exclusive;
            while (i < toks.size() && run.size() < 4) {
                std::string t = strip_token(toks[i]);
                if (t.empty() || name_stopword(toks[i]) || is_coref_label(t))
                    break;
                run.push_back(t);
                ++i;
            }
        }
        std::string joined;
        for (std::size_t k = 0; k < run.size(); ++k) {
            if (k) joined += ' ';
            joined += run[k];
        }
        if (joined.size() >= 8 && chemical_looking_joined(joined))
            return joined;
        return "";
    }

    static bool chemical_looking_joined(const std::string& s) {
        for (char c : s)
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '-')
                return true;
        return false;
    }

    static std::string extract_corefs(const std::string& content) {
        std::vector<std::string> toks = tokenize_ws(content);
        nlohmann::json out = nlohmann::json::object();
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const std::string& raw = toks[i];
            // pattern: <name> (<label>)
            if (raw.size() >= 4 && raw.front() == '(') {
                std::string inner = strip_token(raw);
                if (is_coref_label(inner)) {
                    std::string name = name_run(toks, i, true);
                    if (!name.empty() && !out.contains(inner))
                        out[inner] = name;
                    continue;
                }
            }
            // pattern: <label> = <name>
            std::string bare = strip_token(raw);
            if (is_coref_label(bare) && i + 2 < toks.size() &&
                toks[i + 1] == "=") {
                std::string name = name_run(toks, i + 2, false);
                if (!name.empty() && !out.contains(bare)) out[bare] = name;
            }
        }
        return out.dump();
    }

    static bool percentage_token(const std::string& t) {
        if (t.size() < 2 || t.back() != '%') return false;
        if (!std::isdigit(static_cast<unsigned char>(t.front()))) return false;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            unsigned char c = t[i];
            if (!std::isdigit(c) && c != '.' && c != '-') return false;
        }
        return true;
    }

    static std::string extract_reactions(const std::string& content) {
        nlohmann::json out = nlohmann::json::array();
        std::size_t start = 0;
        while (start < content.size()) {
            std::size_t end = content.find_first_of(".!?", start);
            std::size_t sent_end =
                end == std::string::npos ? content.size() : end;
            std::string sentence = content.substr(start, sent_end - start);
            parse_sentence(sentence, start, out);
            start = sent_end + 1;
        }
        return out.dump();
    }

    static void parse_sentence(const std::string& sentence, std::size_t offset,
                               nlohmann::json& out) {
        std::string lower = to_lower(sentence);
        if (lower.find("yield") == std::string::npos) return;
        std::vector<std::string> toks = tokenize_ws(sentence);
        std::size_t gave = toks.size();
        for (std::size_t i = 0; i < toks.size(); ++i) {
            std::string t = to_lower(strip_token(toks[i]));
            if (t == "gave" || t == "afforded") {
                gave = i;
                break;
            }
        }
        if (gave == toks.size()) return;

        nlohmann::json reactants = nlohmann::json::array();
        for (std::size_t i = 0; i < gave; ++i) {
            std::string t = strip_token(toks[i]);
            if (is_coref_label(t)) {
                reactants.push_back(t);
            } else if (i > 0 && to_lower(strip_token(toks[i - 1])) == "with" &&
                       !t.empty() && !name_stopword(toks[i])) {
                reactants.push_back(t);
            }
        }

        nlohmann::json products = nlohmann::json::array();
        std::string solvent, yield_text, catalyst;
        bool seen_in = false;
        for (std::size_t i = gave + 1; i < toks.size(); ++i) {
            std::string t = strip_token(toks[i]);
            std::string tl = to_lower(t);
            if (tl == "in") {
                seen_in = true;
                continue;
            }
            if (!seen_in && (is_coref_label(t) ||
                             (t.size() >= 8 && chemical_looking(t))))
                products.push_back(t);
            if (solvent.empty() && seen_in) {
                for (const std::string& lex : solvent_lexicon())
                    if (tl == to_lower(lex)) {
                        solvent = t;
                        break;
                    }
            }
            if (yield_text.empty() && percentage_token(t)) yield_text = t;
            if (catalyst.empty() && i + 1 < toks.size() &&
                tl == "catalyzed" &&
                to_lower(strip_token(toks[i + 1])) == "by" &&
                i + 2 < toks.size())
                catalyst = strip_token(toks[i + 2]);
        }
        // catalyst may also precede "gave": "... catalyzed by X gave ..."
        for (std::size_t i = 0; catalyst.empty() && i + 2 < gave; ++i)
            if (to_lower(strip_token(toks[i])) == "catalyzed" &&
                to_lower(strip_token(toks[i + 1])) == "by")
                catalyst = strip_token(toks[i + 2]);

        if (products.empty()) return;
        nlohmann::json rec = {
            {"reactants", std::move(reactants)},
            {"catalyst",
             catalyst.empty() ? nlohmann::json() : nlohmann::json(catalyst)},
            {"solvent",
             solvent.empty() ? nlohmann::json() : nlohmann::json(solvent)},
            {"products", std::move(products)},
            {"yield",
             yield_text.empty() ? nlohmann::json() : nlohmann::json(yield_text)},
            {"span", {offset, offset + sentence.size()}}};
        out.push_back(std::move(rec));
    }

    // Picks the candidate whose context defines the label with one of the
    // two definitional patterns; anything else yields an empty answer.
    static std::string answer_revisit(const std::string& content) {
        auto field = [&](const std::string& key) -> std::string {
            std::size_t pos = content.find(key + ": ");
            if (pos == std::string::npos) return "";
            std::size_t b = pos + key.size() + 2;
            std::size_t e = content.find('\n', b);
            return content.substr(b, (e == std::string::npos ? content.size()
                                                             : e) - b);
        };
        std::string label = field("label");
        auto defines = [&](const std::string& ctx, const std::string& cand) {
            if (ctx.empty() || cand.empty()) return false;
            std::string paren = "(" + label + ")";
            bool mentions = ctx.find(cand) != std::string::npos;
            bool pattern = ctx.find(paren) != std::string::npos ||
                           ctx.find(label + " =") != std::string::npos ||
                           ctx.find(label + "=") != std::string::npos;
            return mentions && pattern;
        };
        bool first = defines(field("context_1"), field("candidate_1"));
        bool second = defines(field("context_2"), field("candidate_2"));
        nlohmann::json out;
        if (first && !second) out["molecule"] = field("candidate_1");
        else if (second && !first) out["molecule"] = field("candidate_2");
        else out["molecule"] = "";
        return out.dump();
    }

    std::size_t context_limit_;
};

}  // namespace chemminer
