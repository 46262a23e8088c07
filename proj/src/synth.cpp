#include "ipmkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "ipmkit/errors.hpp"

namespace ipm {

namespace {

constexpr double kMinDepth = 1e-9;

// Shade constants for the flat renderer.
constexpr std::uint8_t kBackgroundGray = 30;
constexpr std::uint8_t kRoadGray = 90;
constexpr std::uint8_t kEdgeLineGray = 220;
constexpr std::uint8_t kLaneLineGray = 180;
constexpr double kEdgeLineHalfWidth = 0.15;  // meters
constexpr double kLaneLineHalfWidth = 0.08;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

struct CameraAxes {
    double s, c;  // sin/cos of pitch
};

// Camera-frame components of world point q (already translated to the camera).
// right = x, down = (0,-s,-c), forward = (0,c,-s).
inline double cam_u(const CameraAxes& ax, Vec3 q) { (void)ax; return q.x; }
inline double cam_v(const CameraAxes& ax, Vec3 q) { return -ax.s * q.y - ax.c * q.z; }
inline double cam_depth(const CameraAxes& ax, Vec3 q) { return ax.c * q.y - ax.s * q.z; }

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    auto cross = [](Point2 o, Point2 a, Point2 b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {  // lower
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {  // upper
        const Point2 p = pts[i];
        while (k >= t && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    hull.resize(k > 1 ? k - 1 : k);
    return hull;
}

bool inside_hull(const std::vector<Point2>& hull, Point2 p) {
    // hull is counterclockwise; boundary counts as inside.
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2 a = hull[i];
        const Point2 b = hull[(i + 1) % hull.size()];
        if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < 0.0) return false;
    }
    return true;
}

void validate_scene(const Scene& scene) {
    if (!(scene.road_width_m > 0.0)) throw InvalidArgument("road width must be positive");
    if (scene.lane_count < 1) throw InvalidArgument("lane count must be at least 1");
    const double half = scene.road_width_m / 2.0;
    for (const auto& v : scene.vehicles) {
        if (v.y_m < 0.0) throw InvalidArgument("vehicle world y must be >= 0");
        if (v.x_m - v.width_m / 2.0 < -half || v.x_m + v.width_m / 2.0 > half)
            throw InvalidArgument("vehicle footprint leaves the road bounds");
        if (!(v.length_m > 0.0) || !(v.width_m > 0.0) || !(v.height_m >= 0.0))
            throw InvalidArgument("vehicle dimensions must be positive");
    }
}

std::string frame_id(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d", index);
    return buf;
}

}  // namespace

Point2 project_point(const CameraModel& cam, Vec3 world) {
    const CameraAxes ax{std::sin(cam.pitch_rad), std::cos(cam.pitch_rad)};
    const Vec3 q{world.x, world.y, world.z - cam.height_m};
    const double depth = cam_depth(ax, q);
    if (depth <= kMinDepth) throw BehindCamera("point is behind the camera plane");
    return {cam.principal.x + cam.focal_px * cam_u(ax, q) / depth,
            cam.principal.y + cam.focal_px * cam_v(ax, q) / depth};
}

double roi_near_distance(const CameraModel& cam) {
    const double s = std::sin(cam.pitch_rad), c = std::cos(cam.pitch_rad);
    const double row = cam.image_height - 2.0;
    const double dv = row - cam.principal.y;
    const double denom = dv * c + cam.focal_px * s;
    if (denom <= 0.0)
        throw InvalidArgument("camera does not see the road at the bottom row");
    return cam.height_m * (cam.focal_px * c - dv * s) / denom;
}

Roi analytic_roi(const CameraModel& cam, double road_width_m, double near_y_m,
                 double length_m) {
    const double half = road_width_m / 2.0;
    Roi roi;
    roi.corners = {project_point(cam, {-half, near_y_m, 0.0}),
                   project_point(cam, {half, near_y_m, 0.0}),
                   project_point(cam, {half, near_y_m + length_m, 0.0}),
                   project_point(cam, {-half, near_y_m + length_m, 0.0})};
    roi.road_width_m = road_width_m;
    roi.length_m = length_m;
    return roi;
}

RenderResult render_scene(const CameraModel& cam, const Scene& scene,
                          const std::string& image_id) {
    validate_scene(scene);
    const double s = std::sin(cam.pitch_rad), c = std::cos(cam.pitch_rad);
    const double half = scene.road_width_m / 2.0;
    const double lane_w = scene.road_width_m / scene.lane_count;

    RenderResult result;
    result.image = Raster(cam.image_width, cam.image_height, 1, kBackgroundGray);

    // Road plane. For a pitch-only camera the ground distance is constant per
    // row: ray through row py has dir = forward + v*down, so the plane hit is
    // t = height / (s + v c), Y = t (c - v s), X = t * u per column.
    for (int py = 0; py < cam.image_height; ++py) {
        const double v = (py - cam.principal.y) / cam.focal_px;
        const double down = s + v * c;
        if (down <= 1e-9) continue;  // at or above the horizon
        const double t = cam.height_m / down;
        const double y_ground = t * (c - v * s);
        if (y_ground < 0.0) continue;
        for (int px = 0; px < cam.image_width; ++px) {
            const double u = (px - cam.principal.x) / cam.focal_px;
            const double x_ground = t * u;
            if (x_ground < -half || x_ground > half) continue;
            std::uint8_t shade = kRoadGray;
            if (std::abs(x_ground + half) < kEdgeLineHalfWidth ||
                std::abs(x_ground - half) < kEdgeLineHalfWidth) {
                shade = kEdgeLineGray;
            } else {
                for (int k = 1; k < scene.lane_count; ++k) {
                    if (std::abs(x_ground - (-half + k * lane_w)) < kLaneLineHalfWidth) {
                        shade = kLaneLineGray;
                        break;
                    }
                }
            }
            result.image.at(px, py) = shade;
        }
    }

    // Vehicles, far to near so nearer boxes paint over farther ones.
    std::vector<std::size_t> order(scene.vehicles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scene.vehicles[a].y_m > scene.vehicles[b].y_m;
    });

    for (std::size_t vi : order) {
        const Vehicle* veh = &scene.vehicles[vi];
        std::vector<Point2> corners;
        corners.reserve(8);
        bool behind = false;
        for (int sx = -1; sx <= 1; sx += 2)
            for (int sy = -1; sy <= 1; sy += 2)
                for (int sz = 0; sz <= 1; ++sz) {
                    const Vec3 w{veh->x_m + sx * veh->width_m / 2.0,
                                 veh->y_m + sy * veh->length_m / 2.0,
                                 sz * veh->height_m};
                    try {
                        corners.push_back(project_point(cam, w));
                    } catch (const BehindCamera&) {
                        behind = true;
                    }
                }
        if (behind) continue;

        double min_x = corners[0].x, max_x = corners[0].x;
        double min_y = corners[0].y, max_y = corners[0].y;
        for (const Point2& p : corners) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }

        const auto hull = convex_hull(corners);
        const int px0 = std::max(0, static_cast<int>(std::floor(min_x)));
        const int px1 = std::min(cam.image_width - 1, static_cast<int>(std::ceil(max_x)));
        const int py0 = std::max(0, static_cast<int>(std::floor(min_y)));
        const int py1 = std::min(cam.image_height - 1, static_cast<int>(std::ceil(max_y)));
        for (int py = py0; py <= py1; ++py)
            for (int px = px0; px <= px1; ++px)
                if (inside_hull(hull, {static_cast<double>(px), static_cast<double>(py)}))
                    result.image.at(px, py) = veh->gray;

        BBox box{std::clamp(min_x, 0.0, cam.image_width - 1.0),
                 std::clamp(min_y, 0.0, cam.image_height - 1.0),
                 std::clamp(max_x, 0.0, cam.image_width - 1.0),
                 std::clamp(max_y, 0.0, cam.image_height - 1.0)};
        if (!(box.width() > 0.0) || !(box.height() > 0.0)) continue;
        Annotation a;
        a.image_id = image_id;
        a.category = "car";
        a.bbox = box;
        result.annotations.push_back(std::move(a));
        result.vehicle_indices.push_back(vi);
    }

    if (scene.pixel_noise > 0.0) {
        std::mt19937_64 rng(scene.seed);
        for (auto& px : result.image.data) {
            const double noisy = px + scene.pixel_noise * (2.0 * uniform01(rng) - 1.0);
            px = static_cast<std::uint8_t>(std::clamp(std::lround(noisy), 0L, 255L));
        }
    }
    return result;
}

SequenceResult generate_sequence(const SequenceConfig& config, int frame_count,
                                 std::uint64_t seed) {
    if (frame_count < 1) throw InvalidArgument("frame count must be >= 1");

    SequenceResult result;
    const double near_y =
        config.roi_near_y_m > 0.0 ? config.roi_near_y_m : roi_near_distance(config.camera);
    result.roi_near_y_m = near_y;
    result.roi = analytic_roi(config.camera, config.road_width_m, near_y,
                              config.roi_length_m);

    std::mt19937_64 rng(seed);
    const double half = config.road_width_m / 2.0;
    const double lane_w = config.road_width_m / config.lane_count;
    const double despawn_y = near_y + config.roi_length_m + 10.0;
    const double spawn_y = std::max(0.0, near_y - 8.0);

    struct Moving {
        Vehicle vehicle;
        double speed;
        int lane;
    };
    std::vector<Moving> traffic;

    auto make_vehicle = [&](int lane, double y) {
        Moving m;
        m.lane = lane;
        m.speed = uniform_in(rng, config.speed_min_mpf, config.speed_max_mpf);
        m.vehicle.length_m = uniform_in(rng, config.vehicle_length_min, config.vehicle_length_max);
        m.vehicle.width_m = uniform_in(rng, config.vehicle_width_min, config.vehicle_width_max);
        m.vehicle.height_m = uniform_in(rng, config.vehicle_height_min, config.vehicle_height_max);
        m.vehicle.x_m = -half + (lane + 0.5) * lane_w + uniform_in(rng, -0.3, 0.3);
        m.vehicle.y_m = y;
        m.vehicle.gray = static_cast<std::uint8_t>(120 + std::lround(uniform01(rng) * 60.0));
        return m;
    };

    for (int i = 0; i < config.initial_vehicles; ++i) {
        const int lane = static_cast<int>(rng() % static_cast<std::uint64_t>(config.lane_count));
        traffic.push_back(make_vehicle(lane, uniform_in(rng, near_y, near_y + config.roi_length_m)));
    }

    result.manifest.case_label = "source";
    result.manifest.roi = result.roi;
    result.frames.reserve(frame_count);

    for (int f = 0; f < frame_count; ++f) {
        if (f > 0) {
            for (auto& m : traffic) m.vehicle.y_m += m.speed;
            std::erase_if(traffic, [&](const Moving& m) { return m.vehicle.y_m > despawn_y; });
            for (int lane = 0; lane < config.lane_count; ++lane) {
                if (uniform01(rng) >= config.spawn_probability) continue;
                bool occupied = false;
                for (const auto& m : traffic)
                    if (m.lane == lane && m.vehicle.y_m < near_y + 12.0) occupied = true;
                if (!occupied) traffic.push_back(make_vehicle(lane, spawn_y + uniform_in(rng, 0.0, 4.0)));
            }
        }

        Scene scene;
        scene.road_width_m = config.road_width_m;
        scene.lane_count = config.lane_count;
        scene.pixel_noise = config.pixel_noise;
        scene.seed = seed ^ (0x9e3779b97f4a7c15ULL * (f + 1));
        for (const auto& m : traffic) scene.vehicles.push_back(m.vehicle);

        const std::string id = frame_id(f);
        RenderResult rendered = render_scene(config.camera, scene, id);

        ImageRecord rec;
        rec.id = id;
        rec.file = id + ".png";
        rec.width = config.camera.image_width;
        rec.height = config.camera.image_height;
        result.manifest.images.push_back(std::move(rec));

        for (std::size_t vi : rendered.vehicle_indices)
            result.annotation_world_y.push_back(scene.vehicles[vi].y_m - near_y);
        for (auto& a : rendered.annotations)
            result.manifest.annotations.push_back(std::move(a));
        result.frames.push_back(std::move(rendered.image));
    }
    return result;
}

std::vector<Annotation> simulate_detector(const std::vector<Annotation>& ground_truths,
                                          const MissModel& miss) {
    if (!(miss.recall_floor >= 0.0 && miss.recall_floor <= 1.0))
        throw InvalidArgument("recall floor must be in [0, 1]");
    std::mt19937_64 rng(miss.seed);
    std::vector<Annotation> detections;
    for (const auto& gt : ground_truths) {
        const double area = gt.bbox.area();
        const double size_score =
            miss.reference_area_px > 0.0 ? std::min(1.0, area / miss.reference_area_px) : 1.0;
        const double p = miss.recall_floor + (1.0 - miss.recall_floor) * size_score;
        if (uniform01(rng) >= p) continue;

        Annotation det = gt;
        const double w = gt.bbox.width(), h = gt.bbox.height();
        BBox jittered{
            gt.bbox.x_min + uniform_in(rng, -1.0, 1.0) * miss.noise_scale * w,
            gt.bbox.y_min + uniform_in(rng, -1.0, 1.0) * miss.noise_scale * h,
            gt.bbox.x_max + uniform_in(rng, -1.0, 1.0) * miss.noise_scale * w,
            gt.bbox.y_max + uniform_in(rng, -1.0, 1.0) * miss.noise_scale * h};
        if (jittered.width() > 0.0 && jittered.height() > 0.0) det.bbox = jittered;
        det.confidence =
            std::clamp(size_score * (1.0 - miss.noise_scale * uniform01(rng)), 0.01, 1.0);
        detections.push_back(std::move(det));
    }
    return detections;
}

}  // namespace ipm
