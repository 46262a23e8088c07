#pragma once

#include <vector>

#include "ipmkit/dataset.hpp"

namespace ipm {

/// Intersection over union of two boxes; 0 when disjoint.
double iou(const BBox& a, const BBox& b);

/// One detection after matching, in descending-confidence order.
struct LabeledDetection {
    double confidence = 0.0;
    bool true_positive = false;
};

struct MatchResult {
    std::vector<LabeledDetection> detections;  // sorted by descending confidence
    int fn_count = 0;                          // ground truths left unmatched
};

/// Greedy matching: detections in descending confidence (ties keep input
/// order), each takes the unmatched ground truth with highest IoU when that
/// IoU >= threshold. Each ground truth matches at most once. Throws
/// MissingConfidence on a detection without a confidence value.
MatchResult match_detections(const std::vector<Annotation>& detections,
                             const std::vector<Annotation>& ground_truths,
                             double iou_threshold);

/// All-points interpolated average precision. Detections must be sorted by
/// descending confidence. Defined as 1 when both inputs are empty and 0 when
/// there are detections but no ground truth.
double average_precision(const std::vector<LabeledDetection>& detections,
                         int ground_truth_count);

struct SectionEval {
    double ap = 0.0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    int gt_count = 0;
};

struct EvalResult {
    std::vector<SectionEval> sections;
    double overall_ap = 0.0;  // pooled over all sections
};

/// Per-section evaluation: ground truths and detections are filtered to each
/// section (out-of-section detections are excluded from that section's AP),
/// matched, and scored. The pooled overall AP merges every section's labeled
/// detections against the total ground-truth count.
EvalResult evaluate_by_section(const std::vector<Annotation>& ground_truths,
                               const std::vector<Annotation>& detections,
                               const SectionMap& m, double iou_threshold);

/// CSV rows `section,ap,tp,fp,fn,gt_count` with 1-based section labels and a
/// trailing `overall` row.
std::string eval_to_csv(const EvalResult& result);

}  // namespace ipm
