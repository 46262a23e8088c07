#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipmkit/calibration.hpp"
#include "ipmkit/dataset.hpp"
#include "ipmkit/errors.hpp"
#include "ipmkit/metrics.hpp"
#include "ipmkit/raster_io.hpp"
#include "ipmkit/synth.hpp"
#include "ipmkit/warp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitDegenerateRoi = 2;
constexpr int kExitImageDecode = 3;

// Removes everything written by a failed command so no partial outputs
// survive a nonzero exit.
class OutputGuard {
public:
    ~OutputGuard() {
        if (committed_) return;
        for (auto it = paths_.rbegin(); it != paths_.rend(); ++it) {
            std::error_code ec;
            fs::remove(*it, ec);
        }
    }
    std::string track(const fs::path& p) {
        paths_.push_back(p);
        return p.string();
    }
    void commit() { committed_ = true; }

private:
    std::vector<fs::path> paths_;
    bool committed_ = false;
};

struct SizeFlag {
    int width = 0;
    int height = 0;
    bool set = false;
};

void parse_out_size(const std::string& text, SizeFlag& size) {
    const auto x = text.find_first_of("xX");
    if (x == std::string::npos)
        throw CLI::ValidationError("--out-size", "expected WIDTHxHEIGHT, e.g. 646x324");
    try {
        size.width = std::stoi(text.substr(0, x));
        size.height = std::stoi(text.substr(x + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--out-size", "expected WIDTHxHEIGHT, e.g. 646x324");
    }
    if (size.width < 1 || size.height < 1)
        throw CLI::ValidationError("--out-size", "dimensions must be positive");
    size.set = true;
}

void write_run_metadata(OutputGuard& guard, const fs::path& dir,
                        const std::string& command, std::uint64_t seed) {
    json j{{"command", command}, {"seed", seed}};
    const std::string path = guard.track(dir / "run.json");
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << "\n";
    if (!out) throw ipm::Error("failed to write " + path);
}

const char* kCornerNames[4] = {"near-left", "near-right", "far-right", "far-left"};

// ---------------------------------------------------------------------------
// calibrate

int cmd_calibrate(const std::string& roi_path, const std::string& out_path,
                  const SizeFlag& out_size, int sections, double section_length) {
    const ipm::Roi roi = ipm::load_roi(roi_path);
    try {
        ipm::validate_roi(roi);
    } catch (const ipm::InvalidArgument& e) {
        std::cerr << "error: unusable ROI: " << e.what() << "\n";
        return kExitDegenerateRoi;
    }

    int out_w = out_size.width, out_h = out_size.height;
    if (!out_size.set) std::tie(out_w, out_h) = ipm::default_out_size(roi);

    ipm::Calibration calib;
    try {
        calib = ipm::make_calibration(roi, out_w, out_h, section_length, sections);
    } catch (const ipm::DegenerateCorrespondences& e) {
        std::cerr << "error: degenerate ROI (" << e.what() << "); corners:";
        for (int i = 0; i < 4; ++i)
            std::cerr << " " << kCornerNames[i] << "=(" << roi.corners[i].x << ","
                      << roi.corners[i].y << ")";
        std::cerr << "\n";
        return kExitDegenerateRoi;
    }

    OutputGuard guard;
    ipm::save_calibration(guard.track(out_path), calib);

    const ipm::Point2 dst_corners[4] = {{0.0, out_h - 1.0},
                                        {out_w - 1.0, out_h - 1.0},
                                        {out_w - 1.0, 0.0},
                                        {0.0, 0.0}};
    double max_residual = 0.0;
    std::printf("calibration written to %s (output %dx%d)\n", out_path.c_str(), out_w, out_h);
    for (int i = 0; i < 4; ++i) {
        const ipm::Point2 p = ipm::apply_homography(calib.h_src_to_dst, roi.corners[i]);
        const double r = std::hypot(p.x - dst_corners[i].x, p.y - dst_corners[i].y);
        max_residual = std::max(max_residual, r);
        std::printf("  %-10s reprojection residual %.3e px\n", kCornerNames[i], r);
    }
    std::printf("  max residual %.3e px\n", max_residual);
    guard.commit();
    return 0;
}

// ---------------------------------------------------------------------------
// transform

ipm::Homography translation_homography(double dx, double dy) {
    return ipm::Homography::from_coefficients({1, 0, dx, 0, 1, dy, 0, 0, 1});
}

int cmd_transform(const std::string& manifest_path, const std::string& calib_path,
                  int case_number, const std::string& out_dir, const SizeFlag& out_size,
                  double split_ratio, std::uint64_t seed, int fill,
                  std::string images_dir) {
    const ipm::DatasetManifest manifest = ipm::load_manifest(manifest_path);
    const ipm::Calibration calib = ipm::load_calibration(calib_path);
    if (manifest.images.empty()) throw ipm::EmptyDataset("manifest has no images");

    if (images_dir.empty()) images_dir = fs::path(manifest_path).parent_path().string();
    fs::create_directories(out_dir);

    OutputGuard guard;
    ipm::DatasetManifest out;
    out.case_label = case_number == 1 ? "case1" : "case2";

    const int out_w = out_size.set ? out_size.width : calib.out_width;
    const int out_h = out_size.set ? out_size.height : calib.out_height;

    ipm::Homography annotation_map;  // source frame -> output frame
    std::optional<ipm::WarpPlan> plan;
    if (case_number == 2) {
        plan = ipm::plan_warp(calib.roi, out_w, out_h, static_cast<std::uint8_t>(fill));
        annotation_map = plan->h_src_to_dst;
        out.roi = calib.roi;
        out.homography = plan->h_src_to_dst;
    }

    int out_width_px = 0, out_height_px = 0;
    bool first_image = true;
    for (const auto& rec : manifest.images) {
        const fs::path src_path = fs::path(images_dir) / rec.file;
        ipm::Raster src;
        try {
            src = ipm::read_image(src_path.string());
        } catch (const ipm::ImageIoError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitImageDecode;
        }
        if (src.width != rec.width || src.height != rec.height)
            throw ipm::ManifestError("image '" + rec.id + "' does not match its manifest size");

        ipm::Raster produced;
        if (case_number == 1) {
            const ipm::CropResult crop = ipm::crop_and_mask(src, calib.roi);
            if (first_image) {
                annotation_map = translation_homography(-crop.offset.x, -crop.offset.y);
                ipm::Roi shifted = calib.roi;
                for (auto& c : shifted.corners) {
                    c.x -= crop.offset.x;
                    c.y -= crop.offset.y;
                }
                out.roi = shifted;
                out.homography = annotation_map;
            }
            produced = std::move(crop.image);
        } else {
            produced = ipm::warp_image(src, *plan);
        }

        if (first_image) {
            out_width_px = produced.width;
            out_height_px = produced.height;
            first_image = false;
        }

        ipm::ImageRecord out_rec;
        out_rec.id = rec.id;
        out_rec.file = rec.id + ".png";
        out_rec.width = produced.width;
        out_rec.height = produced.height;
        out.images.push_back(out_rec);
        ipm::write_image(guard.track(fs::path(out_dir) / out_rec.file), produced);
    }

    for (const auto& a : manifest.annotations) {
        const auto mapped =
            ipm::transform_bbox(annotation_map, a.bbox, out_width_px, out_height_px);
        if (!mapped) continue;
        ipm::Annotation moved = a;
        moved.bbox = *mapped;
        out.annotations.push_back(std::move(moved));
    }

    const std::string stem = out.case_label;
    if (split_ratio > 0.0) {
        auto [train, test] = ipm::split_train_test(out, split_ratio, seed);
        ipm::save_manifest(guard.track(fs::path(out_dir) / (stem + "_train.json")), train);
        ipm::save_manifest(guard.track(fs::path(out_dir) / (stem + "_test.json")), test);
        write_run_metadata(guard, out_dir, "transform", seed);
        std::printf("%s: %zu train / %zu test images, %zu annotations total\n",
                    stem.c_str(), train.images.size(), test.images.size(),
                    out.annotations.size());
    } else {
        ipm::save_manifest(guard.track(fs::path(out_dir) / (stem + ".json")), out);
        std::printf("%s: %zu images, %zu annotations\n", stem.c_str(),
                    out.images.size(), out.annotations.size());
    }
    guard.commit();
    return 0;
}

// ---------------------------------------------------------------------------
// synth

ipm::SequenceConfig sequence_config_from_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ipm::ManifestError("cannot open scene config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ipm::ManifestError(path + ": invalid JSON: " + e.what());
    }

    ipm::SequenceConfig cfg;
    try {
        if (j.contains("camera")) {
            const auto& jc = j["camera"];
            if (jc.contains("focal_px")) cfg.camera.focal_px = jc["focal_px"].get<double>();
            if (jc.contains("principal"))
                cfg.camera.principal = {jc["principal"].at(0).get<double>(),
                                        jc["principal"].at(1).get<double>()};
            if (jc.contains("height_m")) cfg.camera.height_m = jc["height_m"].get<double>();
            if (jc.contains("pitch_deg"))
                cfg.camera.pitch_rad = jc["pitch_deg"].get<double>() * 3.14159265358979323846 / 180.0;
            if (jc.contains("image")) {
                cfg.camera.image_width = jc["image"].at(0).get<int>();
                cfg.camera.image_height = jc["image"].at(1).get<int>();
                cfg.camera.principal = {(cfg.camera.image_width - 1.0) / 2.0,
                                        (cfg.camera.image_height - 1.0) / 2.0};
            }
            if (jc.contains("principal"))
                cfg.camera.principal = {jc["principal"].at(0).get<double>(),
                                        jc["principal"].at(1).get<double>()};
        }
        if (j.contains("road_width_m")) cfg.road_width_m = j["road_width_m"].get<double>();
        if (j.contains("lane_count")) cfg.lane_count = j["lane_count"].get<int>();
        if (j.contains("roi_length_m")) cfg.roi_length_m = j["roi_length_m"].get<double>();
        if (j.contains("roi_near_y_m")) cfg.roi_near_y_m = j["roi_near_y_m"].get<double>();
        if (j.contains("speed_mpf")) {
            cfg.speed_min_mpf = j["speed_mpf"].at(0).get<double>();
            cfg.speed_max_mpf = j["speed_mpf"].at(1).get<double>();
        }
        if (j.contains("spawn_probability"))
            cfg.spawn_probability = j["spawn_probability"].get<double>();
        if (j.contains("initial_vehicles")) cfg.initial_vehicles = j["initial_vehicles"].get<int>();
        if (j.contains("vehicle_length")) {
            cfg.vehicle_length_min = j["vehicle_length"].at(0).get<double>();
            cfg.vehicle_length_max = j["vehicle_length"].at(1).get<double>();
        }
        if (j.contains("vehicle_width")) {
            cfg.vehicle_width_min = j["vehicle_width"].at(0).get<double>();
            cfg.vehicle_width_max = j["vehicle_width"].at(1).get<double>();
        }
        if (j.contains("vehicle_height")) {
            cfg.vehicle_height_min = j["vehicle_height"].at(0).get<double>();
            cfg.vehicle_height_max = j["vehicle_height"].at(1).get<double>();
        }
        if (j.contains("pixel_noise")) cfg.pixel_noise = j["pixel_noise"].get<double>();
    } catch (const json::exception& e) {
        throw ipm::ManifestError(path + ": scene config schema violation: " + e.what());
    }
    return cfg;
}

int cmd_synth_generate(const std::string& config_path, int frames, std::uint64_t seed,
                       const std::string& out_dir) {
    ipm::SequenceConfig cfg;
    if (!config_path.empty()) cfg = sequence_config_from_json(config_path);

    const ipm::SequenceResult seq = ipm::generate_sequence(cfg, frames, seed);
    fs::create_directories(out_dir);

    OutputGuard guard;
    for (std::size_t i = 0; i < seq.frames.size(); ++i)
        ipm::write_image(guard.track(fs::path(out_dir) / seq.manifest.images[i].file),
                         seq.frames[i]);
    ipm::save_manifest(guard.track(fs::path(out_dir) / "manifest.json"), seq.manifest);
    ipm::save_roi(guard.track(fs::path(out_dir) / "roi.json"), seq.roi);
    write_run_metadata(guard, out_dir, "synth generate", seed);

    std::printf("generated %zu frames, %zu annotations (roi near edge %.2f m)\n",
                seq.frames.size(), seq.manifest.annotations.size(), seq.roi_near_y_m);
    guard.commit();
    return 0;
}

int cmd_synth_simulate(const std::string& manifest_path, const std::string& out_path,
                       double ref_area, double recall_floor, double noise,
                       std::uint64_t seed) {
    const ipm::DatasetManifest gt = ipm::load_manifest(manifest_path);
    ipm::MissModel miss;
    miss.reference_area_px = ref_area;
    miss.recall_floor = recall_floor;
    miss.noise_scale = noise;
    miss.seed = seed;

    ipm::DatasetManifest out = gt;
    out.annotations = ipm::simulate_detector(gt.annotations, miss);

    OutputGuard guard;
    ipm::save_manifest(guard.track(out_path), out);
    write_run_metadata(guard, fs::path(out_path).parent_path(), "synth simulate", seed);
    std::printf("simulated %zu detections from %zu ground truths\n",
                out.annotations.size(), gt.annotations.size());
    guard.commit();
    return 0;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const std::string& gt_path, const std::string& det_path,
             const std::string& out_csv, double iou_threshold, int sections,
             double section_length) {
    const ipm::DatasetManifest gt = ipm::load_manifest(gt_path);
    const ipm::DatasetManifest det = ipm::load_manifest(det_path);
    const ipm::SectionMap m = ipm::section_map_for_manifest(gt, section_length, sections);

    const ipm::EvalResult result =
        ipm::evaluate_by_section(gt.annotations, det.annotations, m, iou_threshold);

    OutputGuard guard;
    if (!out_csv.empty()) {
        std::ofstream out(guard.track(out_csv), std::ios::binary);
        out << ipm::eval_to_csv(result);
        if (!out) throw ipm::Error("failed to write " + out_csv);
    }

    std::printf("%-8s %8s %6s %6s %6s %6s\n", "section", "ap", "tp", "fp", "fn", "gt");
    for (std::size_t s = 0; s < result.sections.size(); ++s) {
        const auto& se = result.sections[s];
        std::printf("%-8zu %8.4f %6d %6d %6d %6d\n", s + 1, se.ap, se.tp, se.fp, se.fn,
                    se.gt_count);
    }
    std::printf("%-8s %8.4f\n", "overall", result.overall_ap);
    guard.commit();
    return 0;
}

// ---------------------------------------------------------------------------
// report

int cmd_report_counts(const std::string& manifest_path, const std::string& out_csv,
                      int sections, double section_length) {
    const ipm::DatasetManifest d = ipm::load_manifest(manifest_path);
    const ipm::SectionMap m = ipm::section_map_for_manifest(d, section_length, sections);
    const ipm::DatasetReport report = ipm::dataset_report(d, m);

    std::string csv = "section,images,objects\n";
    std::printf("%-10s %8s %8s\n", "section", "images", "objects");
    for (std::size_t s = 0; s < report.sections.size(); ++s) {
        const auto& row = report.sections[s];
        csv += std::to_string(s + 1) + "," + std::to_string(row.images) + "," +
               std::to_string(row.objects) + "\n";
        std::printf("%-10zu %8d %8d\n", s + 1, row.images, row.objects);
    }
    csv += "total," + std::to_string(report.total_images) + "," +
           std::to_string(report.total_objects) + "\n";
    std::printf("%-10s %8d %8d\n", "total", report.total_images, report.total_objects);

    OutputGuard guard;
    if (!out_csv.empty()) {
        std::ofstream out(guard.track(out_csv), std::ios::binary);
        out << csv;
        if (!out) throw ipm::Error("failed to write " + out_csv);
    }
    guard.commit();
    return 0;
}

std::vector<std::pair<std::string, double>> read_eval_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ipm::Error("cannot open eval csv: " + path);
    std::vector<std::pair<std::string, double>> rows;
    std::string line;
    std::getline(in, line);  // header
    if (line.rfind("section,ap", 0) != 0)
        throw ipm::Error(path + ": not an eval csv (missing section,ap header)");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        rows.emplace_back(line.substr(0, c1), std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    return rows;
}

int cmd_report_compare(const std::string& case1_csv, const std::string& case2_csv,
                       const std::string& out_csv) {
    const auto rows1 = read_eval_csv(case1_csv);
    const auto rows2 = read_eval_csv(case2_csv);
    if (rows1.size() != rows2.size())
        throw ipm::Error("eval csvs disagree on section count");

    std::string csv = "section,case1_ap,case2_ap\n";
    std::printf("%-10s %10s %10s\n", "section", "case1_ap", "case2_ap");
    char buf[96];
    for (std::size_t i = 0; i < rows1.size(); ++i) {
        if (rows1[i].first != rows2[i].first)
            throw ipm::Error("eval csvs disagree on section labels");
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f\n", rows1[i].first.c_str(),
                      rows1[i].second, rows2[i].second);
        csv += buf;
        std::printf("%-10s %10.4f %10.4f\n", rows1[i].first.c_str(), rows1[i].second,
                    rows2[i].second);
    }

    OutputGuard guard;
    if (!out_csv.empty()) {
        std::ofstream out(guard.track(out_csv), std::ios::binary);
        out << csv;
        if (!out) throw ipm::Error("failed to write " + out_csv);
    }
    guard.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverse-perspective mapping toolkit for roadway CCTV detection datasets"};
    app.require_subcommand(1);

    // calibrate
    auto* calibrate = app.add_subcommand(
        "calibrate", "Estimate the warp and road-plane maps from an ROI config");
    std::string roi_path, calib_out;
    std::string out_size_text;
    int sections = 4;
    double section_length = 50.0;
    calibrate->add_option("--roi", roi_path, "ROI config JSON")->required();
    calibrate->add_option("--out", calib_out, "calibration output path")->required();
    calibrate->add_option("--out-size", out_size_text, "warped size WxH (default: from ROI)");
    calibrate->add_option("--sections", sections, "number of distance sections");
    calibrate->add_option("--section-length", section_length, "section length in meters");

    // transform
    auto* transform = app.add_subcommand(
        "transform", "Produce case-1 (crop+mask) or case-2 (warped) images and labels");
    std::string t_manifest, t_calib, t_out_dir, t_out_size_text, t_images_dir;
    int t_case = 0;
    double t_split = 0.0;
    std::uint64_t t_seed = 42;
    int t_fill = 0;
    transform->add_option("--manifest", t_manifest, "source manifest JSON")->required();
    transform->add_option("--calibration", t_calib, "calibration JSON")->required();
    transform->add_option("--case", t_case, "experiment arm: 1 or 2")
        ->required()
        ->check(CLI::IsMember({1, 2}));
    transform->add_option("--out-dir", t_out_dir, "output directory")->required();
    transform->add_option("--out-size", t_out_size_text, "case-2 output size WxH");
    transform->add_option("--split", t_split, "train fraction; writes _train/_test manifests")
        ->check(CLI::Range(0.0, 1.0));
    transform->add_option("--seed", t_seed, "split shuffle seed");
    transform->add_option("--fill", t_fill, "fill value for out-of-roi samples")
        ->check(CLI::Range(0, 255));
    transform->add_option("--images-dir", t_images_dir,
                          "directory holding source images (default: manifest dir)");

    // synth
    auto* synth = app.add_subcommand("synth", "Synthetic scenes and simulated detections");
    synth->require_subcommand(1);
    auto* generate = synth->add_subcommand("generate", "Render a seeded vehicle sequence");
    std::string g_config, g_out_dir;
    int g_frames = 500;
    std::uint64_t g_seed = 42;
    generate->add_option("--config", g_config, "scene config JSON (defaults when omitted)");
    generate->add_option("--frames", g_frames, "frame count")->check(CLI::PositiveNumber);
    generate->add_option("--seed", g_seed, "sequence seed");
    generate->add_option("--out-dir", g_out_dir, "output directory")->required();

    auto* simulate = synth->add_subcommand(
        "simulate", "Turn ground truths into area-dependent simulated detections");
    std::string s_manifest, s_out;
    double s_ref_area = 2000.0, s_floor = 0.05, s_noise = 0.05;
    std::uint64_t s_seed = 42;
    simulate->add_option("--manifest", s_manifest, "ground-truth manifest")->required();
    simulate->add_option("--out", s_out, "detections manifest output path")->required();
    simulate->add_option("--ref-area", s_ref_area, "pixel area at which recall saturates");
    simulate->add_option("--recall-floor", s_floor, "minimum keep probability")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--noise", s_noise, "box jitter / confidence noise scale");
    simulate->add_option("--seed", s_seed, "detector seed");

    // eval
    auto* eval = app.add_subcommand("eval", "Section-wise average precision");
    std::string e_gt, e_det, e_out;
    double e_iou = 0.5;
    int e_sections = 4;
    double e_section_length = 50.0;
    eval->add_option("--gt", e_gt, "ground-truth manifest")->required();
    eval->add_option("--det", e_det, "detections manifest")->required();
    eval->add_option("--out", e_out, "CSV output path");
    eval->add_option("--iou", e_iou, "IoU match threshold")->check(CLI::Range(0.0, 1.0));
    eval->add_option("--sections", e_sections, "number of distance sections");
    eval->add_option("--section-length", e_section_length, "section length in meters");

    // report
    auto* report = app.add_subcommand("report", "Dataset accounting and case comparison");
    report->require_subcommand(1);
    auto* counts = report->add_subcommand("counts", "Per-section image/object counts");
    std::string rc_manifest, rc_out;
    int rc_sections = 4;
    double rc_section_length = 50.0;
    counts->add_option("--manifest", rc_manifest, "manifest JSON")->required();
    counts->add_option("--out", rc_out, "CSV output path");
    counts->add_option("--sections", rc_sections, "number of distance sections");
    counts->add_option("--section-length", rc_section_length, "section length in meters");

    auto* compare = report->add_subcommand("compare", "Merge two eval CSVs side by side");
    std::string cmp_case1, cmp_case2, cmp_out;
    compare->add_option("--case1", cmp_case1, "case-1 eval CSV")->required();
    compare->add_option("--case2", cmp_case2, "case-2 eval CSV")->required();
    compare->add_option("--out", cmp_out, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (calibrate->parsed()) {
            SizeFlag size;
            if (!out_size_text.empty()) parse_out_size(out_size_text, size);
            return cmd_calibrate(roi_path, calib_out, size, sections, section_length);
        }
        if (transform->parsed()) {
            SizeFlag size;
            if (!t_out_size_text.empty()) parse_out_size(t_out_size_text, size);
            return cmd_transform(t_manifest, t_calib, t_case, t_out_dir, size, t_split,
                                 t_seed, t_fill, t_images_dir);
        }
        if (synth->parsed()) {
            if (generate->parsed())
                return cmd_synth_generate(g_config, g_frames, g_seed, g_out_dir);
            return cmd_synth_simulate(s_manifest, s_out, s_ref_area, s_floor, s_noise,
                                      s_seed);
        }
        if (eval->parsed())
            return cmd_eval(e_gt, e_det, e_out, e_iou, e_sections, e_section_length);
        if (report->parsed()) {
            if (counts->parsed())
                return cmd_report_counts(rc_manifest, rc_out, rc_sections,
                                         rc_section_length);
            return cmd_report_compare(cmp_case1, cmp_case2, cmp_out);
        }
    } catch (const ipm::ImageIoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitImageDecode;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
