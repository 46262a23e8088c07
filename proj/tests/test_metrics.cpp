#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ipmkit/errors.hpp"
#include "ipmkit/metrics.hpp"
#include "oracles.hpp"

using ipm::Annotation;
using ipm::average_precision;
using ipm::BBox;
using ipm::iou;
using ipm::LabeledDetection;
using ipm::match_detections;
using ipm::SectionMap;

namespace {

Annotation det(const std::string& img, BBox b, double conf) {
    Annotation a;
    a.image_id = img;
    a.bbox = b;
    a.confidence = conf;
    return a;
}

Annotation gt(const std::string& img, BBox b) {
    Annotation a;
    a.image_id = img;
    a.bbox = b;
    return a;
}

SectionMap identity_map() {
    SectionMap m;
    m.h_image_to_world = ipm::Homography::identity();
    return m;
}

double ap_of(std::vector<LabeledDetection> dets, int gt_count) {
    std::stable_sort(dets.begin(), dets.end(),
                     [](const LabeledDetection& a, const LabeledDetection& b) {
                         return a.confidence > b.confidence;
                     });
    return average_precision(dets, gt_count);
}

}  // namespace

TEST_CASE("iou fixtures") {
    const BBox a{0, 0, 2, 2};
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(a, {5, 5, 7, 7}) == 0.0);
    CHECK(iou(a, {1, 0, 3, 2}) == 2.0 / 6.0);  // exact arithmetic
    CHECK(iou(a, {2, 0, 4, 2}) == 0.0);        // touching edges do not overlap
}

TEST_CASE("iou is symmetric and bounded") {
    std::mt19937_64 rng(31);
    auto u = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    for (int i = 0; i < 200; ++i) {
        const BBox a{u(0, 50), u(0, 50), u(51, 100), u(51, 100)};
        const BBox b{u(0, 50), u(0, 50), u(51, 100), u(51, 100)};
        const double ab = iou(a, b);
        CHECK(ab == iou(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("single detection over threshold is a true positive") {
    const auto r = match_detections({det("i", {0, 0, 10, 10}, 0.9)},
                                    {gt("i", {1, 0, 11, 10})}, 0.5);
    REQUIRE(r.detections.size() == 1);
    CHECK(r.detections[0].true_positive);
    CHECK(r.fn_count == 0);
}

TEST_CASE("each ground truth matches at most once") {
    const auto r = match_detections(
        {det("i", {0, 0, 10, 10}, 0.7), det("i", {1, 0, 11, 10}, 0.9)},
        {gt("i", {0, 0, 10, 10})}, 0.5);
    REQUIRE(r.detections.size() == 2);
    // ranked by confidence: the 0.9 detection wins the ground truth
    CHECK(r.detections[0].confidence == 0.9);
    CHECK(r.detections[0].true_positive);
    CHECK_FALSE(r.detections[1].true_positive);
    CHECK(r.fn_count == 0);
}

TEST_CASE("detections never match ground truth on another image") {
    const auto r = match_detections({det("a", {0, 0, 10, 10}, 0.9)},
                                    {gt("b", {0, 0, 10, 10})}, 0.5);
    CHECK_FALSE(r.detections[0].true_positive);
    CHECK(r.fn_count == 1);
}

TEST_CASE("detections without confidence are rejected") {
    Annotation bare = gt("i", {0, 0, 10, 10});
    CHECK_THROWS_AS(match_detections({bare}, {}, 0.5), ipm::MissingConfidence);
}

TEST_CASE("crafted 3 gt / 4 det instance matches the exhaustive optimum") {
    const std::vector<Annotation> gts = {gt("i", {0, 0, 10, 10}),
                                         gt("i", {20, 0, 30, 10}),
                                         gt("i", {40, 0, 50, 10})};
    const std::vector<Annotation> dets = {det("i", {0, 0, 10, 10}, 0.95),
                                          det("i", {1, 0, 11, 10}, 0.90),
                                          det("i", {21, 0, 31, 10}, 0.85),
                                          det("i", {40, 2, 50, 12}, 0.80)};

    // exhaustive: assign each detection to a distinct gt (or none), valid when
    // IoU >= 0.5, maximizing the number of matches
    int best_tp = 0;
    auto recurse = [&](auto&& self, std::size_t d, unsigned used, int tps) -> void {
        if (d == dets.size()) {
            best_tp = std::max(best_tp, tps);
            return;
        }
        self(self, d + 1, used, tps);
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (used & (1u << g)) continue;
            if (oracle::ref_iou(dets[d].bbox, gts[g].bbox) < 0.5) continue;
            self(self, d + 1, used | (1u << g), tps + 1);
        }
    };
    recurse(recurse, 0, 0, 0);
    CHECK(best_tp == 3);

    const auto r = match_detections(dets, gts, 0.5);
    REQUIRE(r.detections.size() == 4);
    int greedy_tp = 0;
    for (const auto& d : r.detections) greedy_tp += d.true_positive;
    CHECK(greedy_tp == best_tp);
    // the unique optimum leaves exactly the duplicate 0.90 detection unmatched
    CHECK(r.detections[0].true_positive);
    CHECK_FALSE(r.detections[1].true_positive);
    CHECK(r.detections[2].true_positive);
    CHECK(r.detections[3].true_positive);
    CHECK(r.fn_count == 0);
}

TEST_CASE("average precision edge cases") {
    CHECK(average_precision({}, 0) == 1.0);              // both empty
    CHECK(average_precision({}, 5) == 0.0);              // misses only
    CHECK(average_precision({{0.9, false}}, 0) == 0.0);  // spurious dets
    CHECK(average_precision({{0.9, true}, {0.8, true}}, 2) == 1.0);
}

TEST_CASE("hand-computed AP fixture: TP@0.9, FP@0.8, TP@0.7 over 2 gts") {
    const std::vector<LabeledDetection> dets = {{0.9, true}, {0.8, false}, {0.7, true}};
    // PR: (0.5, 1.0), (0.5, 0.5), (1.0, 2/3); interpolated = 0.5*1 + 0.5*(2/3)
    CHECK(std::abs(average_precision(dets, 2) - 5.0 / 6.0) < 1e-12);
    CHECK(average_precision(dets, 2) ==
          oracle::ref_average_precision({true, false, true}, 2));
}

TEST_CASE("appending a false positive never increases AP") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<LabeledDetection> dets;
        const int gt_count = 1 + int(rng() % 8);
        int tp_left = gt_count;
        const int n = 1 + int(rng() % 10);
        for (int i = 0; i < n; ++i) {
            const bool is_tp = tp_left > 0 && (rng() % 2 == 0);
            if (is_tp) --tp_left;
            dets.push_back({double(rng() % 1000) / 1000.0, is_tp});
        }
        const double before = ap_of(dets, gt_count);
        dets.push_back({double(rng() % 1000) / 1000.0, false});
        CHECK(ap_of(dets, gt_count) <= before + 1e-12);
    }
}

TEST_CASE("a top-confidence true positive never decreases AP") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<LabeledDetection> dets;
        const int gt_count = 2 + int(rng() % 8);
        int tp_used = 0;
        const int n = 1 + int(rng() % 10);
        for (int i = 0; i < n; ++i) {
            const bool is_tp = tp_used < gt_count - 1 && (rng() % 2 == 0);
            if (is_tp) ++tp_used;
            dets.push_back({0.9 * double(rng() % 1000) / 1000.0, is_tp});
        }
        const double before = ap_of(dets, gt_count);
        dets.push_back({1.0, true});  // recovers one of the remaining misses
        CHECK(ap_of(dets, gt_count) >= before - 1e-12);
    }
}

TEST_CASE("AP depends only on the confidence ranking") {
    const std::vector<LabeledDetection> base = {
        {0.9, true}, {0.8, false}, {0.7, true}, {0.4, false}, {0.3, true}};
    const double ap = average_precision(base, 4);
    std::vector<LabeledDetection> squashed = base;
    for (auto& d : squashed) d.confidence = std::exp(d.confidence) / 10.0;
    CHECK(ap_of(squashed, 4) == ap);
    std::vector<LabeledDetection> shifted = base;
    for (auto& d : shifted) d.confidence = 0.1 + d.confidence / 2.0;
    CHECK(ap_of(shifted, 4) == ap);
}

TEST_CASE("interpolated precision envelope is non-increasing") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + int(rng() % 12);
        std::vector<bool> flags;
        for (int i = 0; i < n; ++i) flags.push_back(rng() % 2 == 0);
        std::vector<double> prec;
        int tp = 0;
        for (int i = 0; i < n; ++i) {
            if (flags[i]) ++tp;
            prec.push_back(double(tp) / double(i + 1));
        }
        for (int i = n - 2; i >= 0; --i) prec[i] = std::max(prec[i], prec[i + 1]);
        for (int i = 0; i + 1 < n; ++i) CHECK(prec[i] >= prec[i + 1]);
    }
}

TEST_CASE("perfect detections give AP 1.0 in every section") {
    const SectionMap m = identity_map();
    std::vector<Annotation> gts, dets;
    for (int s = 0; s < 4; ++s)
        for (int i = 0; i < 5; ++i) {
            const double y = s * 50.0 + 10.0 + i * 7.0;
            gts.push_back(gt("img", {10.0 * i, y - 3, 10.0 * i + 8, y + 3}));
            Annotation d = gts.back();
            d.confidence = 1.0;
            dets.push_back(d);
        }
    const auto result = ipm::evaluate_by_section(gts, dets, m, 0.5);
    for (const auto& se : result.sections) {
        CHECK(se.ap == 1.0);
        CHECK(se.fp == 0);
        CHECK(se.fn == 0);
        CHECK(se.gt_count == 5);
    }
    CHECK(result.overall_ap == 1.0);
}

TEST_CASE("detections in one section never affect another") {
    const SectionMap m = identity_map();
    std::vector<Annotation> gts, dets;
    for (int s = 0; s < 4; ++s) {
        const double y = s * 50.0 + 25.0;
        gts.push_back(gt("img", {0, y - 3, 8, y + 3}));
    }
    // detect only the section-0 object
    Annotation d = gts[0];
    d.confidence = 0.9;
    dets.push_back(d);

    const auto result = ipm::evaluate_by_section(gts, dets, m, 0.5);
    CHECK(result.sections[0].ap == 1.0);
    CHECK(result.sections[1].ap == 0.0);
    CHECK(result.sections[2].ap == 0.0);
    CHECK(result.sections[3].ap == 0.0);
}

TEST_CASE("per-section evaluation matches the straight-line reference") {
    const SectionMap m = identity_map();
    std::mt19937_64 rng(53);
    auto u = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };

    std::vector<Annotation> gts, dets;
    for (int img = 0; img < 6; ++img) {
        const std::string id = "img_" + std::to_string(img);
        for (int i = 0; i < 25; ++i) {
            const double y = u(2, 198);
            const double x = u(0, 600);
            const BBox box{x, y - 2.5, x + 12, y + 2.5};
            gts.push_back(gt(id, box));
            // distance-dependent detector: drop far objects more often
            const double keep = 1.0 - 0.8 * (y / 200.0);
            if (u(0, 1) < keep) {
                const double jx = u(-1.5, 1.5), jy = u(-0.8, 0.8);
                dets.push_back(det(id,
                                   {box.x_min + jx, box.y_min + jy, box.x_max + jx,
                                    box.y_max + jy},
                                   std::clamp(keep + u(-0.1, 0.1), 0.01, 1.0)));
            }
            if (u(0, 1) < 0.08)  // background false positive
                dets.push_back(
                    det(id, {u(0, 600), y - 2, u(610, 640), y + 2}, u(0.01, 0.4)));
        }
    }

    const auto result = ipm::evaluate_by_section(gts, dets, m, 0.5);
    int pooled_tp = 0, pooled_fn = 0;
    for (int s = 0; s < 4; ++s) {
        const auto gs = ipm::filter_by_section(gts, m, s);
        const auto ds = ipm::filter_by_section(dets, m, s);
        const auto ref = oracle::ref_evaluate(ds, gs, 0.5);
        CHECK(result.sections[s].ap == doctest::Approx(ref.ap).epsilon(1e-12));
        CHECK(result.sections[s].tp == ref.tp);
        CHECK(result.sections[s].fp == ref.fp);
        CHECK(result.sections[s].fn == ref.fn);
        // tp + fn always equals the section's ground-truth count
        CHECK(result.sections[s].tp + result.sections[s].fn == int(gs.size()));
        pooled_tp += ref.tp;
        pooled_fn += ref.fn;
    }
    CHECK(pooled_tp + pooled_fn == int(gts.size()));
    CHECK(result.overall_ap > 0.0);
    CHECK(result.overall_ap <= 1.0);
}

TEST_CASE("eval csv has one row per section plus overall") {
    const SectionMap m = identity_map();
    std::vector<Annotation> gts = {gt("img", {0, 20, 8, 30})};
    std::vector<Annotation> dets = {det("img", {0, 20, 8, 30}, 1.0)};
    const auto result = ipm::evaluate_by_section(gts, dets, m, 0.5);
    const std::string csv = ipm::eval_to_csv(result);
    CHECK(csv.rfind("section,ap,tp,fp,fn,gt_count\n", 0) == 0);
    CHECK(csv.find("\n1,1.000000,1,0,0,1\n") != std::string::npos);
    CHECK(csv.find("overall,1.000000,1,0,0,1\n") != std::string::npos);
}
