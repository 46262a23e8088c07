#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "ipmkit/geometry.hpp"
#include "ipmkit/raster.hpp"

namespace ipm {

/// Road-plane region of interest. Corners are source-image pixels ordered
/// near-left, near-right, far-right, far-left and must form a convex
/// quadrilateral. road_width_m / length_m give the real-world extent.
struct Roi {
    std::array<Point2, 4> corners;
    double road_width_m = 0.0;
    double length_m = 0.0;
};

/// Throws InvalidArgument when the corner winding is not convex or the
/// real-world extents are not positive.
void validate_roi(const Roi& roi);

struct WarpPlan {
    Homography h_src_to_dst;
    int out_width = 0;
    int out_height = 0;
    std::uint8_t fill = 0;
};

/// Maps the ROI onto the output pixel-center rectangle: near edge to the
/// bottom row (y = out_height - 1), far edge to the top row (y = 0).
WarpPlan plan_warp(const Roi& roi, int out_width, int out_height,
                   std::uint8_t fill = 0);

/// Output size that makes one warped pixel roughly square in world meters:
/// width = round(near-edge pixel length), height = width * length_m / road_width_m.
std::pair<int, int> default_out_size(const Roi& roi);

/// Inverse-mapping warp with bilinear sampling; samples falling outside the
/// source take the plan's fill value.
Raster warp_image(const Raster& src, const WarpPlan& plan);

struct CropResult {
    Raster image;
    Point2 offset;  // top-left of the crop in source pixels
};

/// Crops the axis-aligned bounding rectangle of the ROI corners and blacks
/// out pixels whose centers fall outside the ROI quadrilateral. Pixels inside
/// the quad are copied exactly. Throws RoiOutOfBounds when a corner lies
/// outside the source image.
CropResult crop_and_mask(const Raster& src, const Roi& roi);

/// True when p lies inside (or on the boundary of) the convex quad.
bool point_in_quad(const std::array<Point2, 4>& quad, Point2 p);

}  // namespace ipm
