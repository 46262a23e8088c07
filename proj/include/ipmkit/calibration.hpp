#pragma once

#include <string>

#include "ipmkit/dataset.hpp"
#include "ipmkit/geometry.hpp"
#include "ipmkit/warp.hpp"

namespace ipm {

/// Everything the pipeline needs to move between the source frame, the
/// warped frame and road-plane meters.
struct Calibration {
    Roi roi;
    int out_width = 0;   // default warp size, overridable at transform time
    int out_height = 0;
    Homography h_src_to_dst;      // source image -> warped image
    Homography h_dst_to_src;
    Homography h_image_to_world;  // source image -> road-plane meters
    double section_length_m = 50.0;
    int section_count = 4;
};

/// World frame of h_image_to_world: x in [0, road_width_m] across the road,
/// y in [0, length_m] measured from the ROI near edge.
Homography image_to_world_from_roi(const Roi& roi);

/// Affine map from warped-image pixels to the same world frame (near edge on
/// the bottom row).
Homography warped_to_world(int out_width, int out_height, double road_width_m,
                           double length_m);

Calibration make_calibration(const Roi& roi, int out_width, int out_height,
                             double section_length_m, int section_count);

Calibration load_calibration(const std::string& path);
void save_calibration(const std::string& path, const Calibration& c);

/// Section map for annotations living in this manifest's frame: warped
/// manifests ("case2") get the affine map from their image size and ROI
/// meters; everything else estimates from the manifest's ROI corners.
SectionMap section_map_for_manifest(const DatasetManifest& d,
                                    double section_length_m, int section_count);

/// Roi JSON file: {"corners": [[x,y] x4], "road_width_m": .., "length_m": ..}.
Roi load_roi(const std::string& path);
void save_roi(const std::string& path, const Roi& roi);

}  // namespace ipm
