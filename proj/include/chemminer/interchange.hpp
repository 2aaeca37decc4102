#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "chemminer/doc_model.hpp"

namespace chemminer {

// Versioned JSON interchange for StructuredDocument. Field names mirror the
// in-memory model one to one; version 1 is the only schema.

inline constexpr int kInterchangeVersion = 1;

namespace detail {

inline nlohmann::json bbox_to_json(const BBox& b) {
    return {{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}};
}

inline BBox bbox_from_json(const nlohmann::json& j) {
    return {j.at("x0").get<double>(), j.at("y0").get<double>(),
            j.at("x1").get<double>(), j.at("y1").get<double>()};
}

inline std::string block_kind_name(BlockKind k) {
    switch (k) {
        case BlockKind::FigureRegion: return "figure-region";
        case BlockKind::TableCandidate: return "table-candidate";
        default: return "text";
    }
}

inline BlockKind block_kind_from_name(const std::string& s) {
    if (s == "figure-region") return BlockKind::FigureRegion;
    if (s == "table-candidate") return BlockKind::TableCandidate;
    return BlockKind::Text;
}

}  // namespace detail

inline nlohmann::json document_to_json(const StructuredDocument& doc) {
    nlohmann::json pages = nlohmann::json::array();
    for (const Page& p : doc.pages) {
        nlohmann::json blocks = nlohmann::json::array();
        for (const Block& b : p.blocks) {
            nlohmann::json lines = nlohmann::json::array();
            for (const Line& l : b.lines) {
                nlohmann::json spans = nlohmann::json::array();
                for (const Span& s : l.spans) {
                    nlohmann::json chars = nlohmann::json::array();
                    for (const Char& c : s.chars)
                        chars.push_back({{"glyph", c.glyph},
                                         {"bbox", detail::bbox_to_json(c.bbox)},
                                         {"font_size", c.font_size},
                                         {"bold", c.bold}});
                    spans.push_back(
                        {{"chars", std::move(chars)}, {"style", s.style}});
                }
                lines.push_back({{"spans", std::move(spans)},
                                 {"baseline_y", l.baseline_y}});
            }
            blocks.push_back({{"lines", std::move(lines)},
                              {"kind", detail::block_kind_name(b.kind)}});
        }
        nlohmann::json segs = nlohmann::json::array();
        for (const VectorSegment& s : p.vector_segments)
            segs.push_back({{"x0", s.x0},
                            {"y0", s.y0},
                            {"x1", s.x1},
                            {"y1", s.y1},
                            {"stroke_width", s.stroke_width}});
        nlohmann::json imgs = nlohmann::json::array();
        for (const EmbeddedImage& im : p.embedded_images)
            imgs.push_back({{"bbox", detail::bbox_to_json(im.bbox)},
                            {"format_tag", im.format_tag},
                            {"payload_ref", im.payload_ref},
                            {"resolution", im.resolution}});
        pages.push_back({{"index", p.index},
                         {"width", p.width},
                         {"height", p.height},
                         {"blocks", std::move(blocks)},
                         {"vector_segments", std::move(segs)},
                         {"embedded_images", std::move(imgs)}});
    }
    return {{"version", kInterchangeVersion},
            {"source_id", doc.source_id},
            {"pages", std::move(pages)}};
}

inline StructuredDocument document_from_json(const nlohmann::json& j) {
    if (j.value("version", 0) != kInterchangeVersion)
        throw std::runtime_error("unsupported interchange version");
    StructuredDocument doc;
    doc.source_id = j.at("source_id").get<std::string>();
    for (const auto& pj : j.at("pages")) {
        Page p;
        p.index = pj.at("index").get<int>();
        p.width = pj.at("width").get<double>();
        p.height = pj.at("height").get<double>();
        for (const auto& bj : pj.value("blocks", nlohmann::json::array())) {
            Block b;
            b.kind = detail::block_kind_from_name(bj.value("kind", "text"));
            for (const auto& lj : bj.at("lines")) {
                Line l;
                l.baseline_y = lj.at("baseline_y").get<double>();
                for (const auto& sj : lj.at("spans")) {
                    Span s;
                    s.style = sj.value("style", "");
                    for (const auto& cj : sj.at("chars")) {
                        Char c;
                        c.glyph = cj.at("glyph").get<std::string>();
                        c.bbox = detail::bbox_from_json(cj.at("bbox"));
                        c.font_size = cj.value("font_size", 10.0);
                        c.bold = cj.value("bold", false);
                        s.chars.push_back(std::move(c));
                    }
                    l.spans.push_back(std::move(s));
                }
                b.lines.push_back(std::move(l));
            }
            p.blocks.push_back(std::move(b));
        }
        for (const auto& sj :
             pj.value("vector_segments", nlohmann::json::array())) {
            VectorSegment s;
            s.x0 = sj.at("x0").get<double>();
            s.y0 = sj.at("y0").get<double>();
            s.x1 = sj.at("x1").get<double>();
            s.y1 = sj.at("y1").get<double>();
            s.stroke_width = sj.value("stroke_width", 1.0);
            p.vector_segments.push_back(s);
        }
        for (const auto& ij :
             pj.value("embedded_images", nlohmann::json::array())) {
            EmbeddedImage im;
            im.bbox = detail::bbox_from_json(ij.at("bbox"));
            im.format_tag = ij.at("format_tag").get<std::string>();
            im.payload_ref = ij.at("payload_ref").get<std::string>();
            im.resolution = ij.value("resolution", 72.0);
            p.embedded_images.push_back(std::move(im));
        }
        doc.pages.push_back(std::move(p));
    }
    return doc;
}

inline StructuredDocument load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open interchange file: " + path);
    nlohmann::json j;
    in >> j;
    return document_from_json(j);
}

inline void save_document(const StructuredDocument& doc,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write interchange file: " + path);
    out << document_to_json(doc).dump(2) << "\n";
}

}  // namespace chemminer
