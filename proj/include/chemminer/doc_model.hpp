#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chemminer/geometry.hpp"

namespace chemminer {

struct DocModelConfig {
    double row_tol = 2.0;   // chars whose vertical centers differ <= row_tol share a row
    double axis_tol = 0.5;  // max off-axis deviation for horizontal/vertical segments
};

struct Char {
    std::string glyph;  // one unicode scalar, or a ligature expansion
    BBox bbox;
    double font_size = 10.0;
    bool bold = false;
};

struct Span {
    std::vector<Char> chars;
    std::string style;
};

struct Line {
    std::vector<Span> spans;
    double baseline_y = 0.0;
};

enum class BlockKind { Text, FigureRegion, TableCandidate };

struct Block {
    std::vector<Line> lines;
    BlockKind kind = BlockKind::Text;
};

struct VectorSegment {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    double stroke_width = 1.0;

    bool is_horizontal(double axis_tol) const { return std::abs(y0 - y1) <= axis_tol; }
    bool is_vertical(double axis_tol) const { return std::abs(x0 - x1) <= axis_tol; }

    BBox bbox() const {
        return {std::min(x0, x1), std::min(y0, y1), std::max(x0, x1),
                std::max(y0, y1)};
    }
};

struct EmbeddedImage {
    BBox bbox;
    std::string format_tag;   // e.g. "png", "jpeg"
    std::string payload_ref;  // opaque byte handle ("b64:..." or a file path)
    double resolution = 72.0; // dots per inch
};

struct Page {
    int index = 0;
    double width = 612.0;
    double height = 792.0;
    std::vector<Block> blocks;
    std::vector<VectorSegment> vector_segments;
    std::vector<EmbeddedImage> embedded_images;

    std::vector<Char> all_chars() const {
        std::vector<Char> out;
        for (const auto& b : blocks)
            for (const auto& l : b.lines)
                for (const auto& s : l.spans)
                    out.insert(out.end(), s.chars.begin(), s.chars.end());
        return out;
    }
};

struct StructuredDocument {
    std::string source_id;
    std::vector<Page> pages;
};

// Total order over a page's chars: rows are buckets of chars whose vertical
// centers differ by <= row_tol (grown greedily in y order), sorted top to
// bottom, then left to right within a row. Ties break by input index.
inline std::vector<Char> reading_order(const Page& page,
                                       const DocModelConfig& cfg = {}) {
    std::vector<Char> chars = page.all_chars();
    std::vector<std::size_t> idx(chars.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return chars[a].bbox.cy() < chars[b].bbox.cy();
    });

    // Assign row buckets along the y-sorted sequence.
    std::vector<int> bucket(chars.size(), 0);
    int cur = -1;
    double anchor = 0.0;
    for (std::size_t i : idx) {
        double cy = chars[i].bbox.cy();
        if (cur < 0 || cy - anchor > cfg.row_tol) {
            ++cur;
            anchor = cy;
        }
        bucket[i] = cur;
    }

    std::vector<std::size_t> order(chars.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         if (bucket[a] != bucket[b]) return bucket[a] < bucket[b];
                         if (chars[a].bbox.x0 != chars[b].bbox.x0)
                             return chars[a].bbox.x0 < chars[b].bbox.x0;
                         return a < b;
                     });

    std::vector<Char> out;
    out.reserve(chars.size());
    for (std::size_t i : order) out.push_back(chars[i]);
    return out;
}

// Reading-order text for one page: words joined by single spaces, row breaks
// rendered as newlines. A word break is a horizontal gap wider than a quarter
// of the font size or an explicit whitespace glyph.
inline std::string page_text(const Page& page, const DocModelConfig& cfg = {}) {
    std::vector<Char> chars = reading_order(page, cfg);
    std::string out;
    const Char* prev = nullptr;
    for (const auto& c : chars) {
        bool ws = c.glyph == " " || c.glyph == "\t" || c.glyph == "\n";
        if (prev) {
            bool new_row = c.bbox.cy() - prev->bbox.cy() > cfg.row_tol;
            double gap = c.bbox.x0 - prev->bbox.x1;
            if (new_row) {
                if (!out.empty() && out.back() != '\n') out += '\n';
            } else if (gap > 0.25 * c.font_size) {
                if (!out.empty() && out.back() != ' ' && out.back() != '\n')
                    out += ' ';
            }
        }
        if (ws) {
            if (!out.empty() && out.back() != ' ' && out.back() != '\n')
                out += ' ';
        } else {
            out += c.glyph;
        }
        prev = &c;
    }
    return out;
}

struct Violation {
    std::string path;     // e.g. "page[1].block[0].line[2].span[0].char[3]"
    std::string message;
};

using ValidationReport = std::vector<Violation>;

// Scans the whole document and reports every invariant violation; never
// aborts mid-scan. Empty report iff the document is valid.
inline ValidationReport validate_document(const StructuredDocument& doc) {
    ValidationReport report;
    auto bad = [&](std::string path, std::string msg) {
        report.push_back({std::move(path), std::move(msg)});
    };

    for (std::size_t pi = 0; pi < doc.pages.size(); ++pi) {
        const Page& p = doc.pages[pi];
        std::string ppath = "page[" + std::to_string(pi) + "]";
        if (p.index != static_cast<int>(pi))
            bad(ppath, "non-contiguous page indices");
        if (p.width <= 0 || p.height <= 0) bad(ppath, "non-positive page size");

        const double tol = 1.0;
        BBox bounds{-tol, -tol, p.width + tol, p.height + tol};
        auto check_bbox = [&](const BBox& b, const std::string& path) {
            if (!b.valid()) {
                bad(path, "invalid bbox (x0>x1, y0>y1 or non-finite)");
                return;
            }
            if (b.x0 < bounds.x0 || b.y0 < bounds.y0 || b.x1 > bounds.x1 ||
                b.y1 > bounds.y1)
                bad(path, "bbox outside page bounds");
        };

        for (std::size_t bi = 0; bi < p.blocks.size(); ++bi) {
            const Block& blk = p.blocks[bi];
            std::string bpath = ppath + ".block[" + std::to_string(bi) + "]";
            if (blk.lines.empty()) bad(bpath, "empty block");
            for (std::size_t li = 0; li < blk.lines.size(); ++li) {
                const Line& ln = blk.lines[li];
                std::string lpath = bpath + ".line[" + std::to_string(li) + "]";
                if (ln.spans.empty()) bad(lpath, "empty line");
                double ymin = 1e300, ymax = -1e300;
                for (std::size_t si = 0; si < ln.spans.size(); ++si) {
                    const Span& sp = ln.spans[si];
                    std::string spath =
                        lpath + ".span[" + std::to_string(si) + "]";
                    if (sp.chars.empty()) bad(spath, "empty span");
                    for (std::size_t ci = 0; ci < sp.chars.size(); ++ci) {
                        const Char& c = sp.chars[ci];
                        std::string cpath =
                            spath + ".char[" + std::to_string(ci) + "]";
                        if (c.glyph.empty()) bad(cpath, "empty glyph");
                        if (c.font_size <= 0)
                            bad(cpath, "non-positive font size");
                        check_bbox(c.bbox, cpath);
                        ymin = std::min(ymin, c.bbox.y0);
                        ymax = std::max(ymax, c.bbox.y1);
                    }
                }
                if (ymin <= ymax &&
                    (ln.baseline_y < ymin - tol || ln.baseline_y > ymax + tol))
                    bad(lpath, "baseline outside span y-extent");
            }
        }
        for (std::size_t si = 0; si < p.vector_segments.size(); ++si) {
            const VectorSegment& s = p.vector_segments[si];
            if (s.x0 == s.x1 && s.y0 == s.y1)
                bad(ppath + ".segment[" + std::to_string(si) + "]",
                    "degenerate segment (p0 == p1)");
        }
        for (std::size_t ii = 0; ii < p.embedded_images.size(); ++ii) {
            const EmbeddedImage& im = p.embedded_images[ii];
            std::string ipath = ppath + ".image[" + std::to_string(ii) + "]";
            if (im.payload_ref.empty()) bad(ipath, "unresolvable payload_ref");
            check_bbox(im.bbox, ipath);
        }
    }
    return report;
}

}  // namespace chemminer
