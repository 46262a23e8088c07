#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "ipmkit/errors.hpp"
#include "ipmkit/raster_io.hpp"
#include "ipmkit/warp.hpp"
#include "oracles.hpp"

using ipm::apply_homography;
using ipm::Homography;
using ipm::plan_warp;
using ipm::Point2;
using ipm::Raster;
using ipm::Roi;
using ipm::warp_image;
using ipm::WarpPlan;

namespace {

Raster checkerboard(int w, int h, int cell, int channels = 1) {
    Raster img(w, h, channels);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::uint8_t v = ((x / cell + y / cell) % 2) ? 255 : 0;
            for (int c = 0; c < channels; ++c) img.at(x, y, c) = v;
        }
    return img;
}

Raster gradient(int w, int h) {
    Raster img(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.at(x, y) = static_cast<std::uint8_t>((x * 7 + y * 13) % 256);
    return img;
}

Roi rect_roi(double w, double h) {
    // near edge on the bottom row, matching the output corner convention
    Roi roi;
    roi.corners = {Point2{0, h - 1}, Point2{w - 1, h - 1}, Point2{w - 1, 0}, Point2{0, 0}};
    roi.road_width_m = 7.2;
    roi.length_m = 200.0;
    return roi;
}

}  // namespace

TEST_CASE("rectangular roi equal to the output rect plans an identity warp") {
    const WarpPlan plan = plan_warp(rect_roi(640, 480), 640, 480);
    for (int i = 0; i < 9; ++i)
        CHECK(plan.h_src_to_dst.h[i] == doctest::Approx(i % 4 == 0 ? 1.0 : 0.0).epsilon(1e-9));
}

TEST_CASE("trapezoid roi maps corners onto the output rectangle") {
    Roi roi;
    roi.corners = {Point2{100, 300}, Point2{540, 300}, Point2{380, 60}, Point2{260, 60}};
    roi.road_width_m = 7.2;
    roi.length_m = 100.0;
    const WarpPlan plan = plan_warp(roi, 440, 600);

    const Point2 expected[4] = {{0, 599}, {439, 599}, {439, 0}, {0, 0}};
    for (int i = 0; i < 4; ++i) {
        const Point2 got = apply_homography(plan.h_src_to_dst, roi.corners[i]);
        CHECK(std::abs(got.x - expected[i].x) < 1e-6);
        CHECK(std::abs(got.y - expected[i].y) < 1e-6);
    }
}

TEST_CASE("near-left corner always lands on the bottom-left output corner") {
    Roi roi;
    roi.corners = {Point2{155.7, 322.0}, Point2{490.3, 322.0}, Point2{334.8, 104.9},
                   Point2{311.2, 104.9}};
    roi.road_width_m = 7.2;
    roi.length_m = 200.0;
    const WarpPlan plan = plan_warp(roi, 646, 324);
    const Point2 got = apply_homography(plan.h_src_to_dst, roi.corners[0]);
    CHECK(std::abs(got.x - 0.0) < 1e-6);
    CHECK(std::abs(got.y - 323.0) < 1e-6);
}

TEST_CASE("identity plan reproduces the image byte for byte") {
    const Raster img = gradient(64, 48);
    WarpPlan plan;
    plan.h_src_to_dst = Homography::identity();
    plan.out_width = 64;
    plan.out_height = 48;
    CHECK(warp_image(img, plan).data == img.data);
}

TEST_CASE("pure translation shifts content and fills the vacated band") {
    const Raster img = gradient(40, 30);
    WarpPlan plan;
    plan.h_src_to_dst = Homography::from_coefficients({1, 0, 10, 0, 1, 0, 0, 0, 1});
    plan.out_width = 40;
    plan.out_height = 30;
    plan.fill = 7;
    const Raster out = warp_image(img, plan);
    for (int y = 0; y < 30; ++y) {
        for (int x = 0; x < 10; ++x) CHECK(out.at(x, y) == 7);
        for (int x = 10; x < 40; ++x) CHECK(out.at(x, y) == img.at(x - 10, y));
    }
}

TEST_CASE("perspective warp is bit-identical to the reference resampler") {
    const Raster board = checkerboard(160, 120, 8);
    std::mt19937_64 rng(17);
    auto u = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 3; ++trial) {
        const Homography H = Homography::from_coefficients(
            {u(0.8, 1.2), u(-0.1, 0.1), u(-8, 8),
             u(-0.1, 0.1), u(0.8, 1.2), u(-8, 8),
             u(-4e-4, 4e-4), u(-4e-4, 4e-4), 1.0});
        WarpPlan plan{H, 160, 120, 0};
        const Raster ours = warp_image(board, plan);
        const Raster ref = oracle::ref_warp(board, H.h, 160, 120, 0);
        CHECK(ours.data == ref.data);
    }
}

TEST_CASE("three-channel warp treats channels independently") {
    Raster img(32, 24, 3);
    for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 32; ++x) {
            img.at(x, y, 0) = static_cast<std::uint8_t>(x * 8);
            img.at(x, y, 1) = static_cast<std::uint8_t>(y * 10);
            img.at(x, y, 2) = 200;
        }
    WarpPlan plan;
    plan.h_src_to_dst = Homography::from_coefficients({1, 0, 4, 0, 1, 2, 0, 0, 1});
    plan.out_width = 32;
    plan.out_height = 24;
    const Raster out = warp_image(img, plan);
    CHECK(out.channels == 3);
    CHECK(out.at(10, 10, 0) == img.at(6, 8, 0));
    CHECK(out.at(10, 10, 1) == img.at(6, 8, 1));
    CHECK(out.at(10, 10, 2) == 200);
}

TEST_CASE("warp round trip loses at most interpolation error") {
    // smooth, band-limited content so the only loss is resampling
    Raster img(120, 90, 1);
    for (int y = 0; y < 90; ++y)
        for (int x = 0; x < 120; ++x)
            img.at(x, y) = static_cast<std::uint8_t>(
                std::lround(127.5 + 100.0 * std::sin(x * 0.1) * std::cos(y * 0.08)));
    const Homography H = Homography::from_coefficients(
        {1.05, 0.02, 3.0, -0.01, 0.97, -2.0, 1e-4, -5e-5, 1.0});
    const WarpPlan fwd{H, 120, 90, 0};
    const WarpPlan bwd{ipm::invert_homography(H), 120, 90, 0};
    const Raster round = warp_image(warp_image(img, fwd), bwd);

    double abs_err = 0.0;
    int counted = 0;
    for (int y = 0; y < 90; ++y)
        for (int x = 0; x < 120; ++x) {
            // only pixels whose forward image stays in bounds
            const Point2 p = apply_homography(H, {double(x), double(y)});
            if (p.x < 1 || p.x > 118 || p.y < 1 || p.y > 88) continue;
            abs_err += std::abs(int(round.at(x, y)) - int(img.at(x, y)));
            ++counted;
        }
    REQUIRE(counted > 1000);
    CHECK(abs_err / counted <= 2.0);
}

TEST_CASE("crop_and_mask with a full-frame roi is the identity") {
    const Raster img = gradient(50, 40);
    const auto result = ipm::crop_and_mask(img, rect_roi(50, 40));
    CHECK(result.offset.x == 0);
    CHECK(result.offset.y == 0);
    CHECK(result.image.data == img.data);
}

TEST_CASE("pixels outside an interior roi go black, inside stay exact") {
    const Raster img = checkerboard(100, 80, 5);
    Roi roi;
    roi.corners = {Point2{20, 70}, Point2{80, 70}, Point2{60, 10}, Point2{40, 10}};
    roi.road_width_m = 7.2;
    roi.length_m = 100.0;
    const auto result = ipm::crop_and_mask(img, roi);
    CHECK(result.offset.x == 20);
    CHECK(result.offset.y == 10);
    CHECK(result.image.width == 61);
    CHECK(result.image.height == 61);

    for (int y = 0; y < result.image.height; ++y)
        for (int x = 0; x < result.image.width; ++x) {
            const Point2 src_px{double(x + 20), double(y + 10)};
            if (ipm::point_in_quad(roi.corners, src_px)) {
                CHECK(result.image.at(x, y) == img.at(x + 20, y + 10));
            } else {
                CHECK(result.image.at(x, y) == 0);
            }
        }
}

TEST_CASE("masked interior area matches the shoelace area within 0.5%") {
    Raster white(400, 300, 1, 255);
    Roi roi;
    roi.corners = {Point2{60, 280}, Point2{340, 280}, Point2{260, 30}, Point2{140, 30}};
    roi.road_width_m = 7.2;
    roi.length_m = 100.0;
    const auto result = ipm::crop_and_mask(white, roi);
    long lit = 0;
    for (std::uint8_t v : result.image.data) lit += (v == 255);
    const double area = oracle::shoelace_area(roi.corners);
    CHECK(std::abs(lit - area) / area < 0.005);
}

TEST_CASE("roi corners outside the image are rejected") {
    const Raster img = gradient(50, 40);
    Roi roi = rect_roi(50, 40);
    roi.corners[1].x = 55;  // past the right edge
    CHECK_THROWS_AS(ipm::crop_and_mask(img, roi), ipm::RoiOutOfBounds);
}

TEST_CASE("default_out_size follows the near edge and meter aspect") {
    Roi roi;
    roi.corners = {Point2{100, 300}, Point2{500, 300}, Point2{380, 60}, Point2{220, 60}};
    roi.road_width_m = 8.0;
    roi.length_m = 40.0;
    const auto [w, h] = ipm::default_out_size(roi);
    CHECK(w == 400);
    CHECK(h == 2000);
}

TEST_CASE("roi validation rejects non-convex and non-positive setups") {
    Roi roi = rect_roi(50, 40);
    roi.road_width_m = 0.0;
    CHECK_THROWS_AS(ipm::validate_roi(roi), ipm::InvalidArgument);

    Roi bowtie;
    bowtie.corners = {Point2{0, 10}, Point2{10, 0}, Point2{10, 10}, Point2{0, 0}};
    bowtie.road_width_m = 7.2;
    bowtie.length_m = 100.0;
    CHECK_THROWS_AS(ipm::validate_roi(bowtie), ipm::InvalidArgument);
}

TEST_CASE("image io round-trips png, pgm and ppm") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ipmkit_warp_io_test";
    fs::create_directories(dir);

    const Raster gray = gradient(33, 21);
    Raster rgb(17, 9, 3);
    for (std::size_t i = 0; i < rgb.data.size(); ++i)
        rgb.data[i] = static_cast<std::uint8_t>((i * 31) % 256);

    for (const char* name : {"a.png", "a.pgm"}) {
        const std::string path = (dir / name).string();
        ipm::write_image(path, gray);
        const Raster back = ipm::read_image(path);
        CHECK(back.channels == 1);
        CHECK(back.data == gray.data);
    }
    for (const char* name : {"b.png", "b.ppm"}) {
        const std::string path = (dir / name).string();
        ipm::write_image(path, rgb);
        const Raster back = ipm::read_image(path);
        CHECK(back.channels == 3);
        CHECK(back.data == rgb.data);
    }

    CHECK_THROWS_AS(ipm::read_image((dir / "missing.png").string()), ipm::ImageIoError);
    CHECK_THROWS_AS(ipm::write_image((dir / "bad.pgm").string(), rgb), ipm::ImageIoError);
    fs::remove_all(dir);
}
