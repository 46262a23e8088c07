#include "ipmkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ipmkit/errors.hpp"

namespace ipm {

double iou(const BBox& a, const BBox& b) {
    const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    return inter / (a.area() + b.area() - inter);
}

MatchResult match_detections(const std::vector<Annotation>& detections,
                             const std::vector<Annotation>& ground_truths,
                             double iou_threshold) {
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), 0);
    for (const auto& d : detections)
        if (!d.confidence)
            throw MissingConfidence("detection on image '" + d.image_id +
                                    "' has no confidence value");
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *detections[a].confidence > *detections[b].confidence;
    });

    std::vector<bool> gt_taken(ground_truths.size(), false);
    MatchResult result;
    result.detections.reserve(detections.size());
    for (std::size_t di : order) {
        const Annotation& det = detections[di];
        double best_iou = 0.0;
        std::size_t best_gt = ground_truths.size();
        for (std::size_t gi = 0; gi < ground_truths.size(); ++gi) {
            if (gt_taken[gi]) continue;
            if (ground_truths[gi].image_id != det.image_id) continue;
            const double v = iou(det.bbox, ground_truths[gi].bbox);
            if (v > best_iou) {
                best_iou = v;
                best_gt = gi;
            }
        }
        LabeledDetection labeled;
        labeled.confidence = *det.confidence;
        if (best_gt < ground_truths.size() && best_iou >= iou_threshold) {
            labeled.true_positive = true;
            gt_taken[best_gt] = true;
        }
        result.detections.push_back(labeled);
    }
    result.fn_count = static_cast<int>(std::count(gt_taken.begin(), gt_taken.end(), false));
    return result;
}

double average_precision(const std::vector<LabeledDetection>& detections,
                         int ground_truth_count) {
    if (ground_truth_count == 0) return detections.empty() ? 1.0 : 0.0;
    if (detections.empty()) return 0.0;

    // PR points in ranked order.
    std::vector<double> precision(detections.size());
    std::vector<double> recall(detections.size());
    int tp = 0;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        if (detections[i].true_positive) ++tp;
        precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
        recall[i] = static_cast<double>(tp) / ground_truth_count;
    }

    // Interpolate: each precision becomes the max precision at >= that recall.
    for (std::size_t i = detections.size() - 1; i-- > 0;)
        precision[i] = std::max(precision[i], precision[i + 1]);

    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        ap += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return ap;
}

EvalResult evaluate_by_section(const std::vector<Annotation>& ground_truths,
                               const std::vector<Annotation>& detections,
                               const SectionMap& m, double iou_threshold) {
    EvalResult result;
    result.sections.resize(m.section_count);

    std::vector<LabeledDetection> pooled;
    int total_gt = 0;
    for (int s = 0; s < m.section_count; ++s) {
        const auto gts = filter_by_section(ground_truths, m, s);
        const auto dets = filter_by_section(detections, m, s);
        const MatchResult matched = match_detections(dets, gts, iou_threshold);

        SectionEval& se = result.sections[s];
        se.gt_count = static_cast<int>(gts.size());
        se.fn = matched.fn_count;
        for (const auto& d : matched.detections)
            (d.true_positive ? se.tp : se.fp) += 1;
        se.ap = average_precision(matched.detections, se.gt_count);

        pooled.insert(pooled.end(), matched.detections.begin(), matched.detections.end());
        total_gt += se.gt_count;
    }

    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const LabeledDetection& a, const LabeledDetection& b) {
                         return a.confidence > b.confidence;
                     });
    result.overall_ap = average_precision(pooled, total_gt);
    return result;
}

std::string eval_to_csv(const EvalResult& result) {
    std::string out = "section,ap,tp,fp,fn,gt_count\n";
    char buf[160];
    for (std::size_t s = 0; s < result.sections.size(); ++s) {
        const SectionEval& se = result.sections[s];
        std::snprintf(buf, sizeof(buf), "%zu,%.6f,%d,%d,%d,%d\n", s + 1, se.ap,
                      se.tp, se.fp, se.fn, se.gt_count);
        out += buf;
    }
    int tp = 0, fp = 0, fn = 0, gt = 0;
    for (const auto& se : result.sections) {
        tp += se.tp;
        fp += se.fp;
        fn += se.fn;
        gt += se.gt_count;
    }
    std::snprintf(buf, sizeof(buf), "overall,%.6f,%d,%d,%d,%d\n", result.overall_ap,
                  tp, fp, fn, gt);
    out += buf;
    return out;
}

}  // namespace ipm
