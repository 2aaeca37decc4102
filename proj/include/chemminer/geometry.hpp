#pragma once

#include <algorithm>
#include <cmath>

namespace chemminer {

// Page coordinates in points, origin top-left, y grows downward.
struct BBox {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    double cx() const { return 0.5 * (x0 + x1); }
    double cy() const { return 0.5 * (y0 + y1); }

    bool valid() const {
        return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) &&
               std::isfinite(y1) && x0 <= x1 && y0 <= y1;
    }

    bool contains(double x, double y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }

    bool intersects(const BBox& o) const {
        return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
    }

    BBox united(const BBox& o) const {
        return {std::min(x0, o.x0), std::min(y0, o.y0), std::max(x1, o.x1),
                std::max(y1, o.y1)};
    }

    BBox translated(double dx, double dy) const {
        return {x0 + dx, y0 + dy, x1 + dx, y1 + dy};
    }
};

inline double intersection_area(const BBox& a, const BBox& b) {
    double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

inline double iou(const BBox& a, const BBox& b) {
    double inter = intersection_area(a, b);
    double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

}  // namespace chemminer
