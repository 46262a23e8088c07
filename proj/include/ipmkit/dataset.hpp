#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ipmkit/geometry.hpp"
#include "ipmkit/warp.hpp"

namespace ipm {

/// Axis-aligned box in pixel-center coordinates, x_min < x_max, y_min < y_max.
struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    Point2 center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }
};

/// Ground-truth or detection box. Detections carry a confidence in [0,1].
struct Annotation {
    std::string image_id;
    std::string category = "car";
    BBox bbox;
    std::optional<double> confidence;
};

struct ImageRecord {
    std::string id;
    std::string file;
    int width = 0;
    int height = 0;
};

struct DatasetManifest {
    std::string case_label;  // "case1" | "case2" (or "" for raw source data)
    std::vector<ImageRecord> images;
    std::vector<Annotation> annotations;
    std::optional<Homography> homography;  // map used to produce this arm
    std::optional<Roi> roi;                // roi used to produce this arm
};

/// Distance binning: h_image_to_world maps image pixels to road-plane meters
/// with world y measured from the ROI near edge along the driving direction.
struct SectionMap {
    Homography h_image_to_world;
    double section_length_m = 50.0;
    int section_count = 4;
};

/// AABB of the four transformed box corners, clamped to the pixel-center
/// rectangle [0, out_width-1] x [0, out_height-1]. Returns nullopt when the
/// clamped box has zero area. Throws PointAtInfinity when a corner lies on
/// the vanishing line.
std::optional<BBox> transform_bbox(const Homography& H, const BBox& b,
                                   int out_width, int out_height);

/// Section of a box: world y of the mapped box center, binned into half-open
/// [k*len, (k+1)*len) intervals and clamped to [0, section_count-1].
int assign_section(const BBox& b, const SectionMap& m);

/// Deterministic by-image split; train gets floor(n * ratio) images.
std::pair<DatasetManifest, DatasetManifest> split_train_test(
    const DatasetManifest& d, double train_ratio, std::uint64_t seed);

/// Annotations whose assigned section equals `section`.
std::vector<Annotation> filter_by_section(const std::vector<Annotation>& annotations,
                                          const SectionMap& m, int section);

struct SectionCount {
    int images = 0;
    int objects = 0;
};

struct DatasetReport {
    std::vector<SectionCount> sections;  // one entry per section
    int total_images = 0;                // unique image records in the manifest
    int total_objects = 0;
};

/// Per-section accounting: an image counts toward every section that contains
/// at least one of its objects, so section image counts may sum to more than
/// the unique total.
DatasetReport dataset_report(const DatasetManifest& d, const SectionMap& m);

/// Manifest JSON I/O (schema documented in README). Values round-trip exactly.
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const DatasetManifest& d);
DatasetManifest manifest_from_json_text(const std::string& text);
std::string manifest_to_json_text(const DatasetManifest& d);

}  // namespace ipm
