#include "ipmkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "ipmkit/errors.hpp"

namespace ipm {

std::optional<BBox> transform_bbox(const Homography& H, const BBox& b,
                                   int out_width, int out_height) {
    const Point2 corners[4] = {{b.x_min, b.y_min},
                               {b.x_max, b.y_min},
                               {b.x_max, b.y_max},
                               {b.x_min, b.y_max}};
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    for (int i = 0; i < 4; ++i) {
        const Point2 p = apply_homography(H, corners[i]);
        if (i == 0) {
            min_x = max_x = p.x;
            min_y = max_y = p.y;
        } else {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    BBox out{std::clamp(min_x, 0.0, out_width - 1.0),
             std::clamp(min_y, 0.0, out_height - 1.0),
             std::clamp(max_x, 0.0, out_width - 1.0),
             std::clamp(max_y, 0.0, out_height - 1.0)};
    if (!(out.width() > 0.0) || !(out.height() > 0.0)) return std::nullopt;
    return out;
}

int assign_section(const BBox& b, const SectionMap& m) {
    const Point2 world = apply_homography(m.h_image_to_world, b.center());
    const int idx = static_cast<int>(std::floor(world.y / m.section_length_m));
    return std::clamp(idx, 0, m.section_count - 1);
}

namespace {

// Fisher-Yates with explicit rejection sampling so the permutation depends
// only on the seed, not on the standard library's distribution internals.
void shuffle_indices(std::vector<std::size_t>& idx, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::uint64_t bound = i;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do {
            r = rng();
        } while (r >= limit);
        std::swap(idx[i - 1], idx[r % bound]);
    }
}

DatasetManifest subset_by_images(const DatasetManifest& d,
                                 const std::vector<std::size_t>& picks) {
    DatasetManifest out;
    out.case_label = d.case_label;
    out.homography = d.homography;
    out.roi = d.roi;
    std::unordered_set<std::string> ids;
    out.images.reserve(picks.size());
    for (std::size_t i : picks) {
        out.images.push_back(d.images[i]);
        ids.insert(d.images[i].id);
    }
    for (const auto& a : d.annotations)
        if (ids.count(a.image_id)) out.annotations.push_back(a);
    return out;
}

}  // namespace

std::pair<DatasetManifest, DatasetManifest> split_train_test(
    const DatasetManifest& d, double train_ratio, std::uint64_t seed) {
    if (d.images.empty()) throw EmptyDataset("cannot split a manifest with no images");
    if (!(train_ratio > 0.0) || !(train_ratio < 1.0))
        throw InvalidArgument("train ratio must be in (0, 1)");

    std::vector<std::size_t> idx(d.images.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    shuffle_indices(idx, seed);

    // floor with a snap for values that are integers up to fp noise
    // (527 * 0.8 -> 421 train / 106 test).
    const std::size_t train_count = static_cast<std::size_t>(
        std::floor(static_cast<double>(idx.size()) * train_ratio + 1e-9));

    std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + train_count);
    std::vector<std::size_t> test_idx(idx.begin() + train_count, idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {subset_by_images(d, train_idx), subset_by_images(d, test_idx)};
}

std::vector<Annotation> filter_by_section(const std::vector<Annotation>& annotations,
                                          const SectionMap& m, int section) {
    std::vector<Annotation> out;
    for (const auto& a : annotations)
        if (assign_section(a.bbox, m) == section) out.push_back(a);
    return out;
}

DatasetReport dataset_report(const DatasetManifest& d, const SectionMap& m) {
    DatasetReport report;
    report.sections.resize(m.section_count);
    report.total_images = static_cast<int>(d.images.size());
    report.total_objects = static_cast<int>(d.annotations.size());

    std::vector<std::unordered_set<std::string>> images_per_section(m.section_count);
    for (const auto& a : d.annotations) {
        const int s = assign_section(a.bbox, m);
        report.sections[s].objects += 1;
        images_per_section[s].insert(a.image_id);
    }
    for (int s = 0; s < m.section_count; ++s)
        report.sections[s].images = static_cast<int>(images_per_section[s].size());
    return report;
}

}  // namespace ipm
