#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "chemminer/table_detect.hpp"

namespace chemminer {

struct FigureExtractConfig {
    double connect_dist = 5.0;     // endpoint distance linking two segments
    double min_figure_area = 2000.0;  // pt^2
    double target_dpi = 150.0;
    double axis_tol = 0.5;
    double snap_tol = 1.0;
};

enum class FigureKind { Embedded, RasterizedVector };

struct RenderSpec {
    BBox bbox;
    double target_dpi = 150.0;
};

struct FigureAsset {
    int page_index = 0;
    BBox bbox;
    FigureKind kind = FigureKind::Embedded;
    // Embedded assets carry the original payload handle and format tag;
    // vector regions carry a render spec for the external rasterizer.
    std::string payload_ref;
    std::string format_tag;
    RenderSpec render_spec;
};

namespace detail {

inline bool segment_consumed_by_tables(const VectorSegment& s,
                                       const std::vector<TableGrid>& tables,
                                       const FigureExtractConfig& cfg) {
    if (!s.is_horizontal(cfg.axis_tol) && !s.is_vertical(cfg.axis_tol))
        return false;
    for (const TableGrid& t : tables) {
        BBox tb = t.bbox();
        BBox inflated{tb.x0 - cfg.snap_tol, tb.y0 - cfg.snap_tol,
                      tb.x1 + cfg.snap_tol, tb.y1 + cfg.snap_tol};
        if (inflated.contains(s.x0, s.y0) && inflated.contains(s.x1, s.y1))
            return true;
    }
    return false;
}

inline double endpoint_dist2(const VectorSegment& a, const VectorSegment& b) {
    auto d2 = [](double ax, double ay, double bx, double by) {
        double dx = ax - bx, dy = ay - by;
        return dx * dx + dy * dy;
    };
    return std::min({d2(a.x0, a.y0, b.x0, b.y0), d2(a.x0, a.y0, b.x1, b.y1),
                     d2(a.x1, a.y1, b.x0, b.y0), d2(a.x1, a.y1, b.x1, b.y1)});
}

}  // namespace detail

// Embedded raster images pass through byte-identically; connected clusters
// of leftover vector segments large enough to be drawings become render
// specs. Clusters overlapping a detected table (IoU >= 0.5) are dropped.
inline std::vector<FigureAsset> extract_figures(
    const Page& page, const std::vector<TableGrid>& tables,
    const FigureExtractConfig& cfg = {}) {
    std::vector<FigureAsset> out;
    for (const EmbeddedImage& im : page.embedded_images) {
        FigureAsset a;
        a.page_index = page.index;
        a.bbox = im.bbox;
        a.kind = FigureKind::Embedded;
        a.payload_ref = im.payload_ref;
        a.format_tag = im.format_tag;
        out.push_back(std::move(a));
    }

    std::vector<const VectorSegment*> free_segs;
    for (const VectorSegment& s : page.vector_segments)
        if (!detail::segment_consumed_by_tables(s, tables, cfg))
            free_segs.push_back(&s);
    if (free_segs.empty()) return out;

    detail::DisjointSet ds(free_segs.size());
    double limit2 = cfg.connect_dist * cfg.connect_dist;
    for (std::size_t i = 0; i < free_segs.size(); ++i)
        for (std::size_t j = i + 1; j < free_segs.size(); ++j) {
            bool linked =
                free_segs[i]->bbox().intersects(free_segs[j]->bbox()) ||
                detail::endpoint_dist2(*free_segs[i], *free_segs[j]) <= limit2;
            if (linked) ds.unite(i, j);
        }

    std::map<std::size_t, BBox> clusters;
    for (std::size_t i = 0; i < free_segs.size(); ++i) {
        std::size_t r = ds.find(i);
        BBox b = free_segs[i]->bbox();
        auto it = clusters.find(r);
        if (it == clusters.end()) clusters.emplace(r, b);
        else it->second = it->second.united(b);
    }

    std::vector<BBox> boxes;
    for (const auto& [root, box] : clusters) boxes.push_back(box);
    std::sort(boxes.begin(), boxes.end(), [](const BBox& a, const BBox& b) {
        if (a.y0 != b.y0) return a.y0 < b.y0;
        return a.x0 < b.x0;
    });

    for (const BBox& box : boxes) {
        if (box.area() < cfg.min_figure_area) continue;
        bool on_table = false;
        for (const TableGrid& t : tables)
            on_table = on_table || iou(box, t.bbox()) >= 0.5;
        if (on_table) continue;
        FigureAsset a;
        a.page_index = page.index;
        a.bbox = box;
        a.kind = FigureKind::RasterizedVector;
        a.render_spec = {box, cfg.target_dpi};
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace chemminer
