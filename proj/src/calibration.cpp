#include "ipmkit/calibration.hpp"

#include <fstream>

#include <json.hpp>

#include "ipmkit/errors.hpp"

namespace ipm {

namespace {

using nlohmann::json;

json roi_to_json(const Roi& roi) {
    json corners = json::array();
    for (const auto& c : roi.corners) corners.push_back({c.x, c.y});
    return {{"corners", corners},
            {"road_width_m", roi.road_width_m},
            {"length_m", roi.length_m}};
}

Roi roi_from_json(const json& j) {
    Roi roi;
    const auto& corners = j.at("corners");
    if (!corners.is_array() || corners.size() != 4)
        throw ManifestError("roi.corners must hold 4 points");
    for (int i = 0; i < 4; ++i) {
        roi.corners[i].x = corners[i].at(0).get<double>();
        roi.corners[i].y = corners[i].at(1).get<double>();
    }
    roi.road_width_m = j.at("road_width_m").get<double>();
    roi.length_m = j.at("length_m").get<double>();
    return roi;
}

json homography_to_json(const Homography& H) {
    json arr = json::array();
    for (double v : H.h) arr.push_back(v);
    return arr;
}

Homography homography_from_json(const json& j) {
    if (!j.is_array() || j.size() != 9)
        throw ManifestError("homography must hold 9 numbers, row-major");
    std::array<double, 9> coeffs{};
    for (int i = 0; i < 9; ++i) coeffs[i] = j[i].get<double>();
    return Homography::from_coefficients(coeffs);
}

json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError(std::string("cannot open ") + what + ": " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ManifestError(path + ": invalid JSON: " + e.what());
    }
}

}  // namespace

Homography image_to_world_from_roi(const Roi& roi) {
    validate_roi(roi);
    Correspondences c;
    c.src = roi.corners;
    c.dst = {Point2{0.0, 0.0}, Point2{roi.road_width_m, 0.0},
             Point2{roi.road_width_m, roi.length_m}, Point2{0.0, roi.length_m}};
    return homography_from_correspondences(c);
}

Homography warped_to_world(int out_width, int out_height, double road_width_m,
                           double length_m) {
    if (out_width < 2 || out_height < 2)
        throw InvalidArgument("warped frame must be at least 2x2");
    const double sx = road_width_m / (out_width - 1.0);
    const double sy = length_m / (out_height - 1.0);
    return Homography::from_coefficients({sx, 0.0, 0.0,
                                          0.0, -sy, length_m,
                                          0.0, 0.0, 1.0});
}

Calibration make_calibration(const Roi& roi, int out_width, int out_height,
                             double section_length_m, int section_count) {
    if (section_count < 1 || !(section_length_m > 0.0))
        throw InvalidArgument("section parameters must be positive");
    Calibration c;
    c.roi = roi;
    c.out_width = out_width;
    c.out_height = out_height;
    c.h_src_to_dst = plan_warp(roi, out_width, out_height).h_src_to_dst;
    c.h_dst_to_src = invert_homography(c.h_src_to_dst);
    c.h_image_to_world = image_to_world_from_roi(roi);
    c.section_length_m = section_length_m;
    c.section_count = section_count;
    return c;
}

Calibration load_calibration(const std::string& path) {
    const json j = read_json_file(path, "calibration");
    try {
        Calibration c;
        c.roi = roi_from_json(j.at("roi"));
        c.out_width = j.at("out_width").get<int>();
        c.out_height = j.at("out_height").get<int>();
        c.h_src_to_dst = homography_from_json(j.at("homography"));
        c.h_dst_to_src = homography_from_json(j.at("homography_inv"));
        c.h_image_to_world = homography_from_json(j.at("image_to_world"));
        c.section_length_m = j.at("section_length_m").get<double>();
        c.section_count = j.at("section_count").get<int>();
        return c;
    } catch (const json::exception& e) {
        throw ManifestError(path + ": calibration schema violation: " + e.what());
    }
}

void save_calibration(const std::string& path, const Calibration& c) {
    json j;
    j["roi"] = roi_to_json(c.roi);
    j["out_width"] = c.out_width;
    j["out_height"] = c.out_height;
    j["homography"] = homography_to_json(c.h_src_to_dst);
    j["homography_inv"] = homography_to_json(c.h_dst_to_src);
    j["image_to_world"] = homography_to_json(c.h_image_to_world);
    j["section_length_m"] = c.section_length_m;
    j["section_count"] = c.section_count;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ManifestError("cannot open calibration for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw ManifestError("failed to write calibration: " + path);
}

SectionMap section_map_for_manifest(const DatasetManifest& d,
                                    double section_length_m, int section_count) {
    SectionMap m;
    m.section_length_m = section_length_m;
    m.section_count = section_count;
    if (!d.roi)
        throw ManifestError("manifest carries no roi; cannot derive a section map");
    if (d.case_label == "case2") {
        if (d.images.empty())
            throw ManifestError("case2 manifest has no image records for frame size");
        m.h_image_to_world = warped_to_world(d.images.front().width,
                                             d.images.front().height,
                                             d.roi->road_width_m, d.roi->length_m);
    } else {
        m.h_image_to_world = image_to_world_from_roi(*d.roi);
    }
    return m;
}

Roi load_roi(const std::string& path) {
    const json j = read_json_file(path, "roi config");
    try {
        return roi_from_json(j);
    } catch (const json::exception& e) {
        throw ManifestError(path + ": roi schema violation: " + e.what());
    }
}

void save_roi(const std::string& path, const Roi& roi) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ManifestError("cannot open roi for writing: " + path);
    out << roi_to_json(roi).dump(2) << "\n";
    if (!out) throw ManifestError("failed to write roi: " + path);
}

}  // namespace ipm
