#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "chemminer/text_util.hpp"

namespace chemminer {

struct CorefConfig {
    std::vector<std::string> context_cues = {"compound",  "product",
                                             "item",      "substrate",
                                             "catalyst",  "intermediate"};
    std::vector<std::string> anti_cues = {"figure", "fig.", "table", "scheme",
                                          "eq.",    "section", "page"};
    std::size_t min_chemical_token = 8;  // paren-cue: min preceding token length
};

// Label grammar: 1-3 digits followed by 0-2 lowercase letters, whole token.
// Matching is case-sensitive; storage is normalized lowercase.
inline bool is_coref_label(const std::string& token) {
    std::size_t i = 0;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i])))
        ++i;
    if (i < 1 || i > 3) return false;
    std::size_t letters = 0;
    while (i < token.size() &&
           std::islower(static_cast<unsigned char>(token[i])))
        ++i, ++letters;
    return i == token.size() && letters <= 2;
}

inline std::string normalize_label(const std::string& token) {
    return to_lower(token);
}

struct MoleculeName {
    std::string raw;
    std::string normalized;

    static MoleculeName make(const std::string& raw) {
        return {raw, collapse_ws(to_lower(normalize_punct(raw)))};
    }
};

inline bool chemical_looking(const std::string& token) {
    if (token.size() < 8) return false;
    for (char c : token)
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') return true;
    return false;
}

enum class AgentId { Agent1, Agent2 };
enum class Modality { Text, Table, Figure };

struct Provenance {
    int page_index = 0;
    AgentId agent_id = AgentId::Agent1;
    Modality modality = Modality::Text;
};

struct CorefEntry {
    std::string label;  // normalized lowercase
    MoleculeName molecule;
    Provenance provenance;
    std::string context;  // source snippet, kept for revisits
};

enum class LabelVerdict { Accept, RejectPattern, RejectNoContextCue };

// Guards against coincidental number+letter tokens: the token must match the
// label grammar and its context must carry an accepting cue (and no
// overriding figure/table/section reference immediately before it).
inline LabelVerdict validate_label(const std::string& token,
                                   const std::string& context,
                                   const CorefConfig& cfg = {},
                                   bool bold = false) {
    if (!is_coref_label(token)) return LabelVerdict::RejectPattern;
    if (bold) return LabelVerdict::Accept;

    std::vector<std::string> tokens = tokenize_ws(context);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string bare = strip_token(tokens[i]);
        if (bare != token) continue;
        if (i > 0) {
            std::string prev_raw = to_lower(tokens[i - 1]);
            std::string prev = strip_token(prev_raw);
            for (const auto& anti : cfg.anti_cues)
                if (prev == anti || prev_raw == anti)
                    return LabelVerdict::RejectNoContextCue;
            for (const auto& cue : cfg.context_cues)
                if (prev == cue) return LabelVerdict::Accept;
            // Parenthesized label right after a chemical-looking token.
            bool parenthesized = tokens[i].size() > bare.size() &&
                                 tokens[i].front() == '(';
            if (parenthesized && prev.size() >= cfg.min_chemical_token &&
                chemical_looking(prev))
                return LabelVerdict::Accept;
        }
        // Definitional form "label = name".
        if (i + 2 < tokens.size() && tokens[i + 1] == "=" &&
            chemical_looking(strip_token(tokens[i + 2])))
            return LabelVerdict::Accept;
        if (i + 1 < tokens.size()) {
            const std::string& next = tokens[i + 1];
            if (next.size() > 1 && next.front() == '=' &&
                chemical_looking(strip_token(next.substr(1))))
                return LabelVerdict::Accept;
        }
    }
    return LabelVerdict::RejectNoContextCue;
}

enum class InsertOutcome { Inserted, Duplicate, Conflict };

struct Conflict {
    std::string label;  // normalized
    CorefEntry existing;
    CorefEntry incoming;
};

enum class RevisitOutcome { ConfirmedExisting, ReplacedByIncoming, Tombstoned,
                            BackendFailed };

struct RevisitResult {
    std::string label;
    RevisitOutcome outcome;
    std::string answer;  // backend answer text, empty on failure
};

// Shared label -> molecule dictionary with the duplicate/contradiction
// self-check. Inserts are linearizable; resolve may run concurrently with
// inserts; process_revisits must run exclusively.
class CorefDictionary {
public:
    InsertOutcome insert(CorefEntry entry) {
        entry.label = normalize_label(entry.label);
        std::lock_guard lock(mu_);
        auto it = entries_.find(entry.label);
        if (it == entries_.end()) {
            if (tombstones_.count(entry.label)) return InsertOutcome::Duplicate;
            entries_.emplace(entry.label, std::move(entry));
            return InsertOutcome::Inserted;
        }
        if (it->second.molecule.normalized == entry.molecule.normalized)
            return InsertOutcome::Duplicate;
        for (const Conflict& c : revisit_queue_)
            if (c.label == entry.label &&
                c.incoming.molecule.normalized == entry.molecule.normalized)
                return InsertOutcome::Conflict;  // already queued once
        revisit_queue_.push_back({entry.label, it->second, std::move(entry)});
        return InsertOutcome::Conflict;
    }

    std::optional<MoleculeName> resolve(const std::string& label) const {
        std::string key = normalize_label(label);
        std::lock_guard lock(mu_);
        if (tombstones_.count(key)) return std::nullopt;
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second.molecule;
    }

    // backend answers with a molecule name given both candidates and their
    // contexts, or nullopt on transport failure. A matching answer picks the
    // winner; anything else tombstones the label as ambiguous.
    using RevisitBackend = std::function<std::optional<std::string>(
        const Conflict&)>;

    std::vector<RevisitResult> process_revisits(const RevisitBackend& backend) {
        std::lock_guard lock(mu_);
        std::vector<RevisitResult> report;
        std::vector<Conflict> pending;
        for (Conflict& c : revisit_queue_) {
            std::optional<std::string> answer = backend(c);
            if (!answer) {
                report.push_back({c.label, RevisitOutcome::BackendFailed, ""});
                pending.push_back(std::move(c));
                continue;
            }
            std::string norm =
                collapse_ws(to_lower(normalize_punct(*answer)));
            if (norm == c.existing.molecule.normalized) {
                report.push_back(
                    {c.label, RevisitOutcome::ConfirmedExisting, *answer});
            } else if (norm == c.incoming.molecule.normalized) {
                entries_[c.label] = c.incoming;
                report.push_back(
                    {c.label, RevisitOutcome::ReplacedByIncoming, *answer});
            } else {
                entries_.erase(c.label);
                tombstones_.insert(c.label);
                report.push_back({c.label, RevisitOutcome::Tombstoned, *answer});
            }
        }
        revisit_queue_ = std::move(pending);
        return report;
    }

    std::map<std::string, CorefEntry> entries() const {
        std::lock_guard lock(mu_);
        return entries_;
    }
    std::vector<Conflict> conflicts() const {
        std::lock_guard lock(mu_);
        return revisit_queue_;
    }
    std::set<std::string> tombstones() const {
        std::lock_guard lock(mu_);
        return tombstones_;
    }

    nlohmann::json to_json() const {
        std::lock_guard lock(mu_);
        nlohmann::json entries = nlohmann::json::object();
        for (const auto& [label, e] : entries_)
            entries[label] = entry_json(e);
        nlohmann::json conflicts = nlohmann::json::array();
        for (const auto& c : revisit_queue_)
            conflicts.push_back({{"label", c.label},
                                 {"existing", entry_json(c.existing)},
                                 {"incoming", entry_json(c.incoming)}});
        nlohmann::json tombs = nlohmann::json::array();
        for (const auto& t : tombstones_) tombs.push_back(t);
        return {{"entries", std::move(entries)},
                {"conflicts", std::move(conflicts)},
                {"tombstones", std::move(tombs)}};
    }

private:
    static nlohmann::json entry_json(const CorefEntry& e) {
        const char* agent = e.provenance.agent_id == AgentId::Agent1
                                ? "agent1" : "agent2";
        const char* modality = e.provenance.modality == Modality::Text ? "text"
                               : e.provenance.modality == Modality::Table
                                   ? "table" : "figure";
        return {{"molecule_raw", e.molecule.raw},
                {"molecule_normalized", e.molecule.normalized},
                {"provenance",
                 {{"page_index", e.provenance.page_index},
                  {"agent_id", agent},
                  {"modality", modality}}}};
    }

    mutable std::mutex mu_;
    std::map<std::string, CorefEntry> entries_;
    std::vector<Conflict> revisit_queue_;
    std::set<std::string> tombstones_;
};

}  // namespace chemminer
