#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "ipmkit/dataset.hpp"
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

void validate_manifest(const DatasetManifest& d) {
    std::unordered_map<std::string, const ImageRecord*> by_id;
    for (const auto& img : d.images) {
        if (img.width < 1 || img.height < 1)
            throw ManifestError("image '" + img.id + "' has non-positive dimensions");
        if (!by_id.emplace(img.id, &img).second)
            throw ManifestError("duplicate image id '" + img.id + "'");
    }
    if (!d.images.empty()) {
        const int w = d.images.front().width, h = d.images.front().height;
        for (const auto& img : d.images)
            if (img.width != w || img.height != h)
                throw ManifestError("image dimensions are not consistent across the manifest");
    }
    for (const auto& a : d.annotations) {
        if (!by_id.count(a.image_id))
            throw ManifestError("annotation references unknown image '" + a.image_id + "'");
        if (!(a.bbox.x_min < a.bbox.x_max) || !(a.bbox.y_min < a.bbox.y_max))
            throw ManifestError("degenerate bbox on image '" + a.image_id + "'");
        if (a.confidence && !(*a.confidence >= 0.0 && *a.confidence <= 1.0))
            throw ManifestError("confidence outside [0,1] on image '" + a.image_id + "'");
    }
}

}  // namespace

std::string manifest_to_json_text(const DatasetManifest& d) {
    validate_manifest(d);
    json j;
    j["case"] = d.case_label;
    j["images"] = json::array();
    for (const auto& img : d.images)
        j["images"].push_back({{"id", img.id},
                               {"file", img.file},
                               {"width", img.width},
                               {"height", img.height}});
    j["annotations"] = json::array();
    for (const auto& a : d.annotations) {
        json ja = {{"image_id", a.image_id},
                   {"category", a.category},
                   {"bbox", {a.bbox.x_min, a.bbox.y_min, a.bbox.x_max, a.bbox.y_max}}};
        if (a.confidence) ja["confidence"] = *a.confidence;
        j["annotations"].push_back(std::move(ja));
    }
    if (d.homography) j["homography"] = homography_to_json(*d.homography);
    if (d.roi) j["roi"] = roi_to_json(*d.roi);
    return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
    }

    DatasetManifest d;
    try {
        d.case_label = j.at("case").get<std::string>();
        for (const auto& ji : j.at("images")) {
            ImageRecord img;
            img.id = ji.at("id").get<std::string>();
            img.file = ji.at("file").get<std::string>();
            img.width = ji.at("width").get<int>();
            img.height = ji.at("height").get<int>();
            d.images.push_back(std::move(img));
        }
        for (const auto& ja : j.at("annotations")) {
            Annotation a;
            a.image_id = ja.at("image_id").get<std::string>();
            a.category = ja.at("category").get<std::string>();
            const auto& bb = ja.at("bbox");
            if (!bb.is_array() || bb.size() != 4)
                throw ManifestError("bbox must be [x_min, y_min, x_max, y_max]");
            a.bbox = {bb[0].get<double>(), bb[1].get<double>(),
                      bb[2].get<double>(), bb[3].get<double>()};
            if (ja.contains("confidence")) a.confidence = ja.at("confidence").get<double>();
            d.annotations.push_back(std::move(a));
        }
        if (j.contains("homography")) d.homography = homography_from_json(j.at("homography"));
        if (j.contains("roi")) d.roi = roi_from_json(j.at("roi"));
    } catch (const json::exception& e) {
        throw ManifestError(std::string("manifest schema violation: ") + e.what());
    }

    validate_manifest(d);
    return d;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError("cannot open manifest: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return manifest_from_json_text(text);
    } catch (const ManifestError& e) {
        throw ManifestError(path + ": " + e.what());
    }
}

void save_manifest(const std::string& path, const DatasetManifest& d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ManifestError("cannot open manifest for writing: " + path);
    out << manifest_to_json_text(d);
    if (!out) throw ManifestError("failed to write manifest: " + path);
}

}  // namespace ipm
