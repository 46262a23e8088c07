#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipmkit/dataset.hpp"
#include "ipmkit/geometry.hpp"
#include "ipmkit/raster.hpp"
#include "ipmkit/warp.hpp"

namespace ipm {

/// World frame: x across the road (right positive), y along the driving
/// direction away from the camera, z up. The camera sits at (0, 0, height_m)
/// pitched downward by pitch_rad.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct CameraModel {
    double focal_px = 700.0;
    Point2 principal{323.0, 162.0};
    double height_m = 5.0;
    double pitch_rad = 0.10471975511965977;  // 6 degrees
    int image_width = 646;
    int image_height = 324;
};

/// Pinhole projection. Throws BehindCamera when the point has non-positive
/// depth along the optical axis.
Point2 project_point(const CameraModel& cam, Vec3 world);

/// Distance from the camera at which the road surface crosses the
/// second-to-last image row; used as the default ROI near edge.
double roi_near_distance(const CameraModel& cam);

/// ROI built by projecting the road edges at near_y and near_y + length_m.
Roi analytic_roi(const CameraModel& cam, double road_width_m, double near_y_m,
                 double length_m);

struct Vehicle {
    double x_m = 0.0;       // footprint center across the road
    double y_m = 0.0;       // footprint center along the driving direction
    double length_m = 4.5;
    double width_m = 1.8;
    double height_m = 1.5;
    std::uint8_t gray = 150;
};

struct Scene {
    double road_width_m = 7.2;
    int lane_count = 2;
    std::vector<Vehicle> vehicles;
    double pixel_noise = 0.0;  // uniform +/- amplitude added per pixel when > 0
    std::uint64_t seed = 42;
};

struct RenderResult {
    Raster image;
    std::vector<Annotation> annotations;       // one per visible vehicle
    std::vector<std::size_t> vehicle_indices;  // scene.vehicles index per annotation
};

/// Flat-shaded road with painted lane edges; vehicles drawn back-to-front as
/// projected 3-D box silhouettes. Each visible vehicle's annotation is the
/// AABB of its 8 projected corners clipped to the image. Vehicles entirely
/// off-image (or with a corner behind the camera) produce no annotation.
RenderResult render_scene(const CameraModel& cam, const Scene& scene,
                          const std::string& image_id = "frame");

struct SequenceConfig {
    CameraModel camera;
    double road_width_m = 7.2;
    int lane_count = 2;
    double roi_length_m = 200.0;
    double roi_near_y_m = 0.0;  // 0 => roi_near_distance(camera)
    double speed_min_mpf = 1.5;
    double speed_max_mpf = 2.5;
    double spawn_probability = 0.06;  // per lane per frame
    int initial_vehicles = 6;
    double vehicle_length_min = 4.2, vehicle_length_max = 5.0;
    double vehicle_width_min = 1.7, vehicle_width_max = 1.9;
    double vehicle_height_min = 1.3, vehicle_height_max = 1.6;
    double pixel_noise = 0.0;
};

struct SequenceResult {
    DatasetManifest manifest;  // case "source"; roi attached
    std::vector<Raster> frames;
    Roi roi;
    double roi_near_y_m = 0.0;
    // True road-plane distance of each annotation's vehicle center from the
    // ROI near edge, aligned with manifest.annotations. Validation aid.
    std::vector<double> annotation_world_y;
};

/// Simulates traffic: vehicles advance along y each frame, spawn randomly at
/// the near end and despawn past the ROI. Deterministic per seed.
SequenceResult generate_sequence(const SequenceConfig& config, int frame_count,
                                 std::uint64_t seed);

/// Detector stand-in whose recall degrades with object pixel area:
/// p(keep) = floor + (1 - floor) * min(1, area / reference_area).
/// Kept boxes are jittered by +/- noise_scale of their extent per edge and
/// get a confidence that grows with pixel area (noise_scale also perturbs it).
struct MissModel {
    double reference_area_px = 2000.0;
    double recall_floor = 0.05;
    double noise_scale = 0.05;
    std::uint64_t seed = 42;
};

std::vector<Annotation> simulate_detector(const std::vector<Annotation>& ground_truths,
                                          const MissModel& miss);

}  // namespace ipm
