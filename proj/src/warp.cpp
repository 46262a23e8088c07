#include "ipmkit/warp.hpp"

#include <algorithm>
#include <cmath>

#include "ipmkit/errors.hpp"

namespace ipm {

namespace {

double edge_cross(Point2 a, Point2 b, Point2 p) {
    return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

inline std::uint8_t quantize(double v) {
    const long r = std::lround(v);
    return static_cast<std::uint8_t>(std::clamp(r, 0L, 255L));
}

// Bilinear sample at (sx, sy) with the last-row/column cell clamped to the
// image border. Caller guarantees 0 <= sx <= w-1 and 0 <= sy <= h-1.
inline double sample_bilinear(const Raster& src, double sx, double sy, int ch) {
    int x0 = static_cast<int>(std::floor(sx));
    int y0 = static_cast<int>(std::floor(sy));
    const double fx = sx - x0;
    const double fy = sy - y0;
    const int x1 = std::min(x0 + 1, src.width - 1);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double v00 = src.at(x0, y0, ch);
    const double v10 = src.at(x1, y0, ch);
    const double v01 = src.at(x0, y1, ch);
    const double v11 = src.at(x1, y1, ch);
    return (v00 * (1.0 - fx) + v10 * fx) * (1.0 - fy) +
           (v01 * (1.0 - fx) + v11 * fx) * fy;
}

}  // namespace

void validate_roi(const Roi& roi) {
    for (const auto& c : roi.corners)
        if (!std::isfinite(c.x) || !std::isfinite(c.y))
            throw InvalidArgument("roi corner is not finite");
    if (!(roi.road_width_m > 0.0) || !(roi.length_m > 0.0))
        throw InvalidArgument("roi road_width_m and length_m must be positive");

    // Convexity with consistent winding: consecutive edge cross products must
    // share a strict sign.
    double sign = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Point2 a = roi.corners[i];
        const Point2 b = roi.corners[(i + 1) % 4];
        const Point2 c = roi.corners[(i + 2) % 4];
        const double cr = edge_cross(a, b, c);
        if (cr == 0.0) throw InvalidArgument("roi corners are collinear");
        if (sign == 0.0)
            sign = cr;
        else if (sign * cr < 0.0)
            throw InvalidArgument("roi corners do not form a convex quadrilateral");
    }
}

WarpPlan plan_warp(const Roi& roi, int out_width, int out_height, std::uint8_t fill) {
    validate_roi(roi);
    if (out_width < 1 || out_height < 1)
        throw InvalidArgument("warp output size must be at least 1x1");

    const double w = out_width - 1.0;
    const double h = out_height - 1.0;
    Correspondences c;
    c.src = roi.corners;
    c.dst = {Point2{0.0, h}, Point2{w, h}, Point2{w, 0.0}, Point2{0.0, 0.0}};

    WarpPlan plan;
    plan.h_src_to_dst = homography_from_correspondences(c);
    plan.out_width = out_width;
    plan.out_height = out_height;
    plan.fill = fill;
    return plan;
}

std::pair<int, int> default_out_size(const Roi& roi) {
    validate_roi(roi);
    const double near_len = std::hypot(roi.corners[1].x - roi.corners[0].x,
                                       roi.corners[1].y - roi.corners[0].y);
    const int w = std::max(1L, std::lround(near_len));
    const int h = std::max(1L, std::lround(w * roi.length_m / roi.road_width_m));
    return {w, h};
}

Raster warp_image(const Raster& src, const WarpPlan& plan) {
    const Homography inv = invert_homography(plan.h_src_to_dst);
    Raster out(plan.out_width, plan.out_height, src.channels, plan.fill);

    const auto& h = inv.h;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const double s = h[6] * x + h[7] * y + h[8];
            if (std::abs(s) < 1e-12) continue;  // maps to infinity: keep fill
            const double sx = (h[0] * x + h[1] * y + h[2]) / s;
            const double sy = (h[3] * x + h[4] * y + h[5]) / s;
            if (sx < 0.0 || sx > src.width - 1.0 || sy < 0.0 || sy > src.height - 1.0)
                continue;
            for (int ch = 0; ch < src.channels; ++ch)
                out.at(x, y, ch) = quantize(sample_bilinear(src, sx, sy, ch));
        }
    }
    return out;
}

bool point_in_quad(const std::array<Point2, 4>& quad, Point2 p) {
    bool any_pos = false, any_neg = false;
    for (int i = 0; i < 4; ++i) {
        const double cr = edge_cross(quad[i], quad[(i + 1) % 4], p);
        if (cr > 0.0) any_pos = true;
        if (cr < 0.0) any_neg = true;
    }
    return !(any_pos && any_neg);
}

CropResult crop_and_mask(const Raster& src, const Roi& roi) {
    validate_roi(roi);
    double min_x = roi.corners[0].x, max_x = roi.corners[0].x;
    double min_y = roi.corners[0].y, max_y = roi.corners[0].y;
    for (const auto& c : roi.corners) {
        min_x = std::min(min_x, c.x);
        max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y);
        max_y = std::max(max_y, c.y);
    }
    if (min_x < 0.0 || min_y < 0.0 || max_x > src.width - 1.0 || max_y > src.height - 1.0)
        throw RoiOutOfBounds("roi corners fall outside the source image");

    const int x0 = static_cast<int>(std::floor(min_x));
    const int y0 = static_cast<int>(std::floor(min_y));
    const int x1 = std::min(static_cast<int>(std::ceil(max_x)), src.width - 1);
    const int y1 = std::min(static_cast<int>(std::ceil(max_y)), src.height - 1);

    CropResult result;
    result.offset = {static_cast<double>(x0), static_cast<double>(y0)};
    result.image = Raster(x1 - x0 + 1, y1 - y0 + 1, src.channels, 0);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (!point_in_quad(roi.corners, {static_cast<double>(x), static_cast<double>(y)}))
                continue;
            for (int ch = 0; ch < src.channels; ++ch)
                result.image.at(x - x0, y - y0, ch) = src.at(x, y, ch);
        }
    }
    return result;
}

}  // namespace ipm
