#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemminer/interchange.hpp"
#include "chemminer/text_util.hpp"

namespace chemminer {

struct IngestConfig {
    std::size_t fuzzy_max = 2;  // max edit distance for a "misspelled" verdict
    std::vector<std::string> key_phrases = {
        "general procedure", "typical procedure", "general experiment"};
    std::vector<std::string> technical_cues = {
        "general procedure", "typical procedure", "general experiment",
        "experimental section", "experimental", "methods", "methodology",
        "synthesis of", "characterization"};
    std::vector<std::string> non_technical_cues = {
        "references", "acknowledg", "abstract", "introduction", "conclusion"};
};

enum class OcrStatus { Pass, Misspelled, Indeterminate };

struct OcrEvidence {
    std::string target_phrase;
    std::string matched_text;
    std::size_t edit_distance = 0;
};

struct OcrVerdict {
    OcrStatus status = OcrStatus::Indeterminate;
    std::vector<OcrEvidence> evidence;
};

enum class SectionKind { Technical, NonTechnical, Unknown };

// Key-phrase fuzzy gate: for each phrase, the minimum edit distance over all
// same-length windows of the normalized page text. Any exact hit passes;
// any hit within fuzzy_max flags the page as misspelled.
inline OcrVerdict ocr_quality_gate(const std::string& page_text,
                                   const IngestConfig& cfg = {}) {
    std::string text = collapse_ws(to_lower(page_text));
    OcrVerdict verdict;
    std::vector<OcrEvidence> best;
    for (const std::string& raw_phrase : cfg.key_phrases) {
        std::string phrase = collapse_ws(to_lower(raw_phrase));
        if (phrase.empty() || text.size() < phrase.size()) continue;
        OcrEvidence e{raw_phrase, "", phrase.size() + 1};
        for (std::size_t i = 0; i + phrase.size() <= text.size(); ++i) {
            std::string window = text.substr(i, phrase.size());
            std::size_t d = levenshtein(phrase, window);
            if (d < e.edit_distance) {
                e.edit_distance = d;
                e.matched_text = window;
                if (d == 0) break;
            }
        }
        if (e.edit_distance <= cfg.fuzzy_max) best.push_back(std::move(e));
    }

    for (const auto& e : best)
        if (e.edit_distance == 0) {
            verdict.status = OcrStatus::Pass;
            verdict.evidence = {e};
            return verdict;
        }
    if (!best.empty()) {
        verdict.status = OcrStatus::Misspelled;
        verdict.evidence = std::move(best);
        return verdict;
    }
    verdict.status = OcrStatus::Indeterminate;
    return verdict;
}

inline SectionKind classify_section(const std::string& page_text,
                                    const IngestConfig& cfg = {}) {
    std::string text = to_lower(page_text);
    auto hits = [&](const std::vector<std::string>& cues) {
        for (const auto& cue : cues)
            if (text.find(cue) != std::string::npos) return true;
        return false;
    };
    if (hits(cfg.technical_cues)) return SectionKind::Technical;
    if (hits(cfg.non_technical_cues)) return SectionKind::NonTechnical;
    return SectionKind::Unknown;
}

struct ConversionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adapter around an external PDF decoder. The decoder named by the
// CHEMMINER_DECODER env var is invoked as `<decoder> <pdf> <out.json>` and
// must write interchange JSON. When interchange JSON is supplied to the
// pipeline directly this step is skipped entirely.
inline StructuredDocument convert_pdf(const std::string& pdf_path) {
    const char* decoder = std::getenv("CHEMMINER_DECODER");
    if (!decoder || !*decoder)
        throw ConversionError(
            "no decoder configured (set CHEMMINER_DECODER) and input is a PDF");
    if (!std::filesystem::exists(pdf_path))
        throw ConversionError("unreadable PDF: " + pdf_path);

    std::filesystem::path tmp =
        std::filesystem::temp_directory_path() /
        ("chemminer-decode-" +
         std::to_string(std::hash<std::string>{}(pdf_path)) + ".json");
    std::string cmd = std::string(decoder) + " \"" + pdf_path + "\" \"" +
                      tmp.string() + "\" 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw ConversionError("failed to launch decoder: " + cmd);
    std::string diag;
    char buf[256];
    while (fgets(buf, sizeof buf, pipe)) diag += buf;
    int rc = pclose(pipe);
    if (rc != 0) {
        std::filesystem::remove(tmp);
        throw ConversionError("decoder failed (" + std::to_string(rc) +
                              "): " + diag);
    }
    StructuredDocument doc = load_document(tmp.string());
    std::filesystem::remove(tmp);
    if (doc.pages.empty()) throw ConversionError("no pages");
    ValidationReport report = validate_document(doc);
    if (!report.empty())
        throw ConversionError("decoder produced invalid document: " +
                              report.front().path + ": " +
                              report.front().message);
    return doc;
}

}  // namespace chemminer
