#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "chemminer/doc_model.hpp"

namespace chemminer {

struct TableDetectConfig {
    double axis_tol = 0.5;        // segment axis classification / collinearity
    double merge_gap = 3.0;       // max gap closed when merging collinear pieces
    double snap_tol = 1.0;        // intersection snap tolerance
    double clustering_tol = 3.0;  // alignment-axis single-linkage tolerance
    std::size_t min_group_lines = 3;
    double bottom_margin = 72.0;  // cross-page merge: distance to page bottom
    double top_margin = 72.0;     //                    distance to page top
    double col_match_tol = 4.0;   // cross-page merge: column boundary tolerance
    double row_tol = 2.0;
};

enum class AlignmentKind { Left, Right, Center };

struct AlignmentGroup {
    double axis_x = 0.0;
    AlignmentKind kind = AlignmentKind::Left;
    std::set<std::size_t> member_lines;
};

enum class GridLineOrigin { Vector, Virtual };

struct GridLine {
    bool horizontal = true;
    double coordinate = 0.0;         // y for horizontal, x for vertical
    double span_lo = 0.0, span_hi = 0.0;  // extent in the orthogonal axis

    bool spans(double v, double tol) const {
        return v >= span_lo - tol && v <= span_hi + tol;
    }
};

enum class TableOrigin { Vector, Alignment, Fused };

struct TableGrid {
    int page_first = 0, page_last = 0;   // inclusive page-index interval
    std::vector<double> col_boundaries;  // strictly increasing, length C+1
    std::vector<double> row_boundaries;  // strictly increasing, length R+1
    std::vector<std::vector<std::string>> cells;  // R x C
    TableOrigin origin = TableOrigin::Vector;

    std::size_t rows() const { return row_boundaries.size() - 1; }
    std::size_t cols() const { return col_boundaries.size() - 1; }

    BBox bbox() const {
        return {col_boundaries.front(), row_boundaries.front(),
                col_boundaries.back(), row_boundaries.back()};
    }
};

namespace detail {

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Merges same-orientation segments into maximal grid lines: segments whose
// coordinates fall within axis_tol of each other (single linkage) form a
// band; intervals inside a band merge when gaps are <= merge_gap.
inline std::vector<GridLine> merge_segments(
    const std::vector<const VectorSegment*>& segs, bool horizontal,
    const TableDetectConfig& cfg) {
    struct Piece {
        double coord, lo, hi;
    };
    std::vector<Piece> pieces;
    for (const VectorSegment* s : segs) {
        if (horizontal)
            pieces.push_back({0.5 * (s->y0 + s->y1), std::min(s->x0, s->x1),
                              std::max(s->x0, s->x1)});
        else
            pieces.push_back({0.5 * (s->x0 + s->x1), std::min(s->y0, s->y1),
                              std::max(s->y0, s->y1)});
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
        if (a.coord != b.coord) return a.coord < b.coord;
        return a.lo < b.lo;
    });

    std::vector<GridLine> out;
    std::size_t i = 0;
    while (i < pieces.size()) {
        // band: single-linkage chain on coordinate
        std::size_t j = i + 1;
        while (j < pieces.size() &&
               pieces[j].coord - pieces[j - 1].coord <= cfg.axis_tol)
            ++j;
        std::vector<Piece> band(pieces.begin() + i, pieces.begin() + j);
        std::sort(band.begin(), band.end(),
                  [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
        std::size_t k = 0;
        while (k < band.size()) {
            double lo = band[k].lo, hi = band[k].hi;
            double csum = band[k].coord;
            std::size_t n = 1;
            std::size_t m = k + 1;
            while (m < band.size() && band[m].lo - hi <= cfg.merge_gap) {
                hi = std::max(hi, band[m].hi);
                csum += band[m].coord;
                ++n;
                ++m;
            }
            GridLine g;
            g.horizontal = horizontal;
            g.coordinate = csum / static_cast<double>(n);
            g.span_lo = lo;
            g.span_hi = hi;
            out.push_back(g);
            k = m;
        }
        i = j;
    }
    return out;
}

// Dedupes nearly equal boundary coordinates (within tol), keeping means.
inline std::vector<double> dedupe_coords(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i + 1;
        double sum = v[i];
        while (j < v.size() && v[j] - v[j - 1] <= tol) sum += v[j], ++j;
        out.push_back(sum / static_cast<double>(j - i));
        i = j;
    }
    return out;
}

}  // namespace detail

// Vector-border table detection: merge collinear segments into grid lines,
// intersect horizontals with verticals, and turn connected intersection
// lattices with >= 3 distinct coordinates per axis into table grids.
inline std::vector<TableGrid> detect_vector_grids(
    const Page& page, const TableDetectConfig& cfg = {}) {
    std::vector<const VectorSegment*> hs, vs;
    for (const VectorSegment& s : page.vector_segments) {
        if (s.is_horizontal(cfg.axis_tol)) hs.push_back(&s);
        else if (s.is_vertical(cfg.axis_tol)) vs.push_back(&s);
        // non-axis segments are retained in the page but ignored here
    }
    std::vector<GridLine> h = detail::merge_segments(hs, true, cfg);
    std::vector<GridLine> v = detail::merge_segments(vs, false, cfg);
    if (h.empty() || v.empty()) return {};

    // Nodes 0..h-1 are horizontal lines, h..h+v-1 vertical.
    detail::DisjointSet ds(h.size() + v.size());
    std::vector<std::vector<bool>> hits(h.size(),
                                        std::vector<bool>(v.size(), false));
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (h[i].spans(v[j].coordinate, cfg.snap_tol) &&
                v[j].spans(h[i].coordinate, cfg.snap_tol)) {
                hits[i][j] = true;
                ds.unite(i, h.size() + j);
            }

    std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>>
        comps;  // root -> (ys, xs)
    for (std::size_t i = 0; i < h.size(); ++i) {
        bool any = false;
        for (std::size_t j = 0; j < v.size(); ++j) any = any || hits[i][j];
        if (any) comps[ds.find(i)].first.push_back(h[i].coordinate);
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
        bool any = false;
        for (std::size_t i = 0; i < h.size(); ++i) any = any || hits[i][j];
        if (any) comps[ds.find(h.size() + j)].second.push_back(v[j].coordinate);
    }

    std::vector<TableGrid> out;
    for (auto& [root, yx] : comps) {
        std::vector<double> ys = detail::dedupe_coords(yx.first, cfg.snap_tol);
        std::vector<double> xs = detail::dedupe_coords(yx.second, cfg.snap_tol);
        if (ys.size() < 3 || xs.size() < 3) continue;
        TableGrid t;
        t.page_first = t.page_last = page.index;
        t.row_boundaries = ys;
        t.col_boundaries = xs;
        t.cells.assign(ys.size() - 1,
                       std::vector<std::string>(xs.size() - 1));
        t.origin = TableOrigin::Vector;
        out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end(), [](const TableGrid& a, const TableGrid& b) {
        if (a.row_boundaries.front() != b.row_boundaries.front())
            return a.row_boundaries.front() < b.row_boundaries.front();
        return a.col_boundaries.front() < b.col_boundaries.front();
    });
    return out;
}

namespace detail {

struct Word {
    BBox box;
    std::size_t line_index = 0;
};

// Words per visual line: chars grouped by line object, split at horizontal
// gaps wider than a quarter of the font size or at whitespace glyphs.
inline std::vector<Word> page_words(const Page& page,
                                    std::vector<double>* line_ys = nullptr) {
    struct RawLine {
        std::vector<const Char*> chars;
        double y = 0.0;
    };
    std::vector<RawLine> lines;
    for (const Block& b : page.blocks)
        for (const Line& l : b.lines) {
            RawLine rl;
            for (const Span& s : l.spans)
                for (const Char& c : s.chars) rl.chars.push_back(&c);
            if (rl.chars.empty()) continue;
            double cy = 0.0;
            for (const Char* c : rl.chars) cy += c->bbox.cy();
            rl.y = cy / static_cast<double>(rl.chars.size());
            lines.push_back(std::move(rl));
        }
    std::sort(lines.begin(), lines.end(),
              [](const RawLine& a, const RawLine& b) { return a.y < b.y; });

    std::vector<Word> words;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        auto& chars = lines[li].chars;
        std::sort(chars.begin(), chars.end(),
                  [](const Char* a, const Char* b) {
                      return a->bbox.x0 < b->bbox.x0;
                  });
        std::optional<BBox> cur;
        const Char* prev = nullptr;
        auto flush = [&] {
            if (cur) words.push_back({*cur, li});
            cur.reset();
        };
        for (const Char* c : chars) {
            bool ws = c->glyph == " " || c->glyph == "\t";
            if (ws) {
                flush();
                prev = c;
                continue;
            }
            if (cur && prev && c->bbox.x0 - prev->bbox.x1 > 0.25 * c->font_size)
                flush();
            cur = cur ? cur->united(c->bbox) : c->bbox;
            prev = c;
        }
        flush();
        if (line_ys) line_ys->push_back(lines[li].y);
    }
    return words;
}

// Single-linkage 1-d clustering; a cluster qualifies only if every member is
// within tol of the cluster mean (keeps chained prose edges out).
inline std::vector<AlignmentGroup> cluster_axis(
    const std::vector<detail::Word>& words, AlignmentKind kind,
    const TableDetectConfig& cfg) {
    struct P {
        double x;
        std::size_t line;
    };
    std::vector<P> pts;
    for (const auto& w : words) {
        double x = kind == AlignmentKind::Left    ? w.box.x0
                   : kind == AlignmentKind::Right ? w.box.x1
                                                  : w.box.cx();
        pts.push_back({x, w.line_index});
    }
    std::sort(pts.begin(), pts.end(),
              [](const P& a, const P& b) { return a.x < b.x; });
    std::vector<AlignmentGroup> out;
    std::size_t i = 0;
    while (i < pts.size()) {
        std::size_t j = i + 1;
        while (j < pts.size() && pts[j].x - pts[j - 1].x <= cfg.clustering_tol)
            ++j;
        double mean = 0.0;
        for (std::size_t k = i; k < j; ++k) mean += pts[k].x;
        mean /= static_cast<double>(j - i);
        bool tight = true;
        for (std::size_t k = i; k < j; ++k)
            tight = tight && std::abs(pts[k].x - mean) <= cfg.clustering_tol;
        if (tight) {
            AlignmentGroup g;
            g.axis_x = mean;
            g.kind = kind;
            for (std::size_t k = i; k < j; ++k) g.member_lines.insert(pts[k].line);
            if (g.member_lines.size() >= cfg.min_group_lines)
                out.push_back(std::move(g));
        }
        i = j;
    }
    return out;
}

}  // namespace detail

// Implicit (borderless) table detection from repeated word alignment.
// Left/right/center word coordinates are clustered per axis family; runs of
// consecutive lines hitting >= 2 same-kind alignment groups become table
// regions bounded by virtual lines at inter-axis and inter-line midpoints.
inline std::vector<TableGrid> detect_alignment_grids(
    const Page& page, const TableDetectConfig& cfg = {}) {
    std::vector<double> line_ys;
    std::vector<detail::Word> words = detail::page_words(page, &line_ys);
    if (line_ys.size() < cfg.min_group_lines) return {};

    std::vector<AlignmentGroup> groups;
    for (AlignmentKind k :
         {AlignmentKind::Left, AlignmentKind::Right, AlignmentKind::Center}) {
        auto g = detail::cluster_axis(words, k, cfg);
        groups.insert(groups.end(), g.begin(), g.end());
    }

    // For each line, count distinct groups per kind.
    std::size_t n_lines = line_ys.size();
    std::vector<std::map<AlignmentKind, std::set<std::size_t>>> line_hits(
        n_lines);
    for (std::size_t gi = 0; gi < groups.size(); ++gi)
        for (std::size_t li : groups[gi].member_lines)
            line_hits[li][groups[gi].kind].insert(gi);

    auto tabular = [&](std::size_t li) {
        for (const auto& [kind, gs] : line_hits[li])
            if (gs.size() >= 2) return true;
        return false;
    };

    std::vector<TableGrid> out;
    std::size_t i = 0;
    while (i < n_lines) {
        if (!tabular(i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n_lines && tabular(j)) ++j;
        if (j - i >= cfg.min_group_lines) {
            // Column axes: the kind with the most distinct groups over the
            // run; ties prefer left, then right.
            std::map<AlignmentKind, std::set<std::size_t>> run_groups;
            for (std::size_t li = i; li < j; ++li)
                for (const auto& [kind, gs] : line_hits[li])
                    run_groups[kind].insert(gs.begin(), gs.end());
            AlignmentKind best = AlignmentKind::Left;
            std::size_t best_n = 0;
            for (AlignmentKind k : {AlignmentKind::Left, AlignmentKind::Right,
                                    AlignmentKind::Center}) {
                auto it = run_groups.find(k);
                std::size_t n = it == run_groups.end() ? 0 : it->second.size();
                if (n > best_n) best = k, best_n = n;
            }
            if (best_n >= 2) {
                std::vector<double> axes;
                for (std::size_t gi : run_groups[best])
                    axes.push_back(groups[gi].axis_x);
                std::sort(axes.begin(), axes.end());

                // Region word extent, restricted to the run's lines.
                double min_x = 1e300, max_x = -1e300;
                double min_y = 1e300, max_y = -1e300;
                for (const auto& w : words)
                    if (w.line_index >= i && w.line_index < j) {
                        min_x = std::min(min_x, w.box.x0);
                        max_x = std::max(max_x, w.box.x1);
                        min_y = std::min(min_y, w.box.y0);
                        max_y = std::max(max_y, w.box.y1);
                    }

                TableGrid t;
                t.page_first = t.page_last = page.index;
                t.origin = TableOrigin::Alignment;
                t.col_boundaries.push_back(min_x - 1.0);
                for (std::size_t k = 0; k + 1 < axes.size(); ++k)
                    t.col_boundaries.push_back(0.5 * (axes[k] + axes[k + 1]));
                t.col_boundaries.push_back(max_x + 1.0);

                t.row_boundaries.push_back(min_y - 1.0);
                for (std::size_t li = i; li + 1 < j; ++li)
                    t.row_boundaries.push_back(
                        0.5 * (line_ys[li] + line_ys[li + 1]));
                t.row_boundaries.push_back(max_y + 1.0);

                if (t.rows() >= 2 && t.cols() >= 2) {
                    t.cells.assign(t.rows(),
                                   std::vector<std::string>(t.cols()));
                    out.push_back(std::move(t));
                }
            }
        }
        i = j;
    }
    return out;
}

// Fusion: overlapping vector/alignment grids (IoU >= 0.5) resolve in favor
// of the vector grid; survivors get cells filled from char centers.
inline std::vector<TableGrid> fuse_and_fill(const Page& page,
                                            std::vector<TableGrid> vector_grids,
                                            std::vector<TableGrid> alignment_grids,
                                            const TableDetectConfig& cfg = {}) {
    std::vector<TableGrid> survivors = std::move(vector_grids);
    for (auto& a : alignment_grids) {
        bool shadowed = false;
        for (const auto& v : survivors)
            if (iou(a.bbox(), v.bbox()) >= 0.5) {
                shadowed = true;
                break;
            }
        if (!shadowed) survivors.push_back(std::move(a));
    }

    DocModelConfig dcfg;
    dcfg.row_tol = cfg.row_tol;
    std::vector<Char> chars = reading_order(page, dcfg);
    for (TableGrid& t : survivors) {
        struct CellAcc {
            std::string text;
            const Char* prev = nullptr;
        };
        std::vector<std::vector<CellAcc>> acc(
            t.rows(), std::vector<CellAcc>(t.cols()));
        for (const Char& c : chars) {
            double cx = c.bbox.cx(), cy = c.bbox.cy();
            auto col = std::upper_bound(t.col_boundaries.begin(),
                                        t.col_boundaries.end(), cx);
            auto row = std::upper_bound(t.row_boundaries.begin(),
                                        t.row_boundaries.end(), cy);
            if (col == t.col_boundaries.begin() || col == t.col_boundaries.end())
                continue;
            if (row == t.row_boundaries.begin() || row == t.row_boundaries.end())
                continue;
            std::size_t ci = static_cast<std::size_t>(
                col - t.col_boundaries.begin() - 1);
            std::size_t ri = static_cast<std::size_t>(
                row - t.row_boundaries.begin() - 1);
            CellAcc& a = acc[ri][ci];
            bool ws = c.glyph == " " || c.glyph == "\t";
            if (a.prev) {
                bool new_row = c.bbox.cy() - a.prev->bbox.cy() > cfg.row_tol;
                double gap = c.bbox.x0 - a.prev->bbox.x1;
                if ((new_row || gap > 0.25 * c.font_size) && !a.text.empty() &&
                    a.text.back() != ' ')
                    a.text += ' ';
            }
            if (ws) {
                if (!a.text.empty() && a.text.back() != ' ') a.text += ' ';
            } else {
                a.text += c.glyph;
            }
            a.prev = &c;
        }
        for (std::size_t r = 0; r < t.rows(); ++r)
            for (std::size_t c = 0; c < t.cols(); ++c) {
                std::string& s = acc[r][c].text;
                while (!s.empty() && s.back() == ' ') s.pop_back();
                std::size_t b = 0;
                while (b < s.size() && s[b] == ' ') ++b;
                t.cells[r][c] = s.substr(b);
            }
    }
    return survivors;
}

// Merges table segments continued across adjacent pages: same column count,
// matching column boundaries, last/first row boundary near the page break.
inline std::vector<TableGrid> merge_cross_page(std::vector<TableGrid> tables,
                                               const StructuredDocument& doc,
                                               const TableDetectConfig& cfg = {}) {
    std::sort(tables.begin(), tables.end(),
              [](const TableGrid& a, const TableGrid& b) {
                  if (a.page_first != b.page_first)
                      return a.page_first < b.page_first;
                  return a.row_boundaries.front() < b.row_boundaries.front();
              });

    auto page_height = [&](int index) -> double {
        for (const Page& p : doc.pages)
            if (p.index == index) return p.height;
        return 0.0;
    };

    std::vector<TableGrid> out;
    for (TableGrid& t : tables) {
        bool merged = false;
        if (!out.empty()) {
            TableGrid& prev = out.back();
            bool adjacent = t.page_first == prev.page_last + 1;
            bool prev_at_bottom =
                page_height(prev.page_last) - prev.row_boundaries.back() <=
                cfg.bottom_margin;
            bool cur_at_top = t.row_boundaries.front() <= cfg.top_margin;
            bool same_cols = prev.cols() == t.cols();
            bool cols_match = same_cols;
            if (same_cols)
                for (std::size_t i = 0; i < t.col_boundaries.size(); ++i)
                    cols_match = cols_match &&
                                 std::abs(prev.col_boundaries[i] -
                                          t.col_boundaries[i]) <=
                                     cfg.col_match_tol;
            if (adjacent && prev_at_bottom && cur_at_top && cols_match) {
                prev.page_last = t.page_last;
                // Continue the row grid below the previous segment's extent.
                double base = prev.row_boundaries.back();
                for (std::size_t i = 1; i < t.row_boundaries.size(); ++i)
                    prev.row_boundaries.push_back(
                        base + (t.row_boundaries[i] - t.row_boundaries.front()));
                prev.cells.insert(prev.cells.end(), t.cells.begin(),
                                  t.cells.end());
                prev.origin = TableOrigin::Fused;
                merged = true;
            }
        }
        if (!merged) out.push_back(std::move(t));
    }
    return out;
}

inline std::string serialize_table(const TableGrid& t) {
    std::string out;
    for (const auto& row : t.cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += " | ";
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

}  // namespace chemminer
