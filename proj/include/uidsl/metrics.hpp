#pragma once

#include <array>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uidsl/errors.hpp"

// Understanding-task metrics and GRPO rewards: IoU machinery, dual-IoU
// recall/precision rewards, format/referring rewards, OCR and color scoring,
// COCO-style mAP, and coordinate normalization adapters.

namespace uidsl::metrics {

struct BoundingBox {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
    std::string category;

    double area() const { return (x_max - x_min) * (y_max - y_min); }
    bool operator==(const BoundingBox&) const = default;
};

struct CategoryTaxonomy {
    std::vector<std::string> categories;          // exactly 19 entries
    std::set<std::string> hard_categories;        // subset of categories

    // The 19-class taxonomy plus the named challenging categories.
    static const CategoryTaxonomy& standard();
    bool contains(std::string_view name) const;
};

// Throws RangeError unless categories has exactly 19 entries and
// hard_categories is a subset.
CategoryTaxonomy make_taxonomy(std::vector<std::string> categories,
                               std::set<std::string> hard_categories);

struct DetectionCase {
    std::vector<BoundingBox> ground_truth;  // N boxes
    std::vector<BoundingBox> predictions;   // M boxes; list order = confidence rank
    double image_width = 0;
    double image_height = 0;
};

struct Rgb {
    double r = 0, g = 0, b = 0;  // components in [0, 255]
    bool operator==(const Rgb&) const = default;
};

struct ReferringRecord {
    std::string gt_category;
    std::string pred_category;
    std::string gt_text;
    std::string pred_text;
    Rgb gt_color;
    Rgb pred_color;
    bool format_ok = false;
};

// Intersection area over union area; 0 when the union has zero area.
double iou(const BoundingBox& a, const BoundingBox& b);

// (1/N) sum over ground truths of the best IoU any prediction achieves.
// Predictions may be reused across ground truths. Returns 0 when there are no
// predictions; throws EmptyGroundTruthError when N = 0.
double recall_iou_reward(const DetectionCase& c);

// (1/M) sum over predictions of the best IoU any ground truth achieves.
// Throws EmptyPredictionError when M = 0.
double precision_iou_reward(const DetectionCase& c);

// recall + precision + format term, with the empty-side conventions:
// M=0 -> precision term 0; N=0,M=0 -> both IoU terms 1; N=0,M>0 -> recall 1,
// precision 0. Always in [0, 3].
double grounding_reward(const DetectionCase& c, bool format_ok);

enum class OutputSchema { ReferringJson, GroundingJson, DslDocument };

// 1 iff raw_output parses as JSON and conforms to the named schema.
int format_reward(std::string_view raw_output, OutputSchema schema);

// Category-accuracy term plus format term, each 0 or 1.
double referring_reward(const ReferringRecord& record, const CategoryTaxonomy& taxonomy);

// 1 - edit_distance/max(1, |gt|) over Unicode code points, clamped at 0.
double ocr_accuracy(std::string_view gt_text, std::string_view pred_text);

// Sum of squared per-channel deltas scaled by 255; range [0, 3].
double color_distance(const Rgb& gt, const Rgb& pred);

// 1 - color_distance/3, in [0, 1]. This is what evaluation reports.
double color_score(const Rgb& gt, const Rgb& pred);

// "#rrggbb" or "#rgb" (case-insensitive) to an Rgb triple.
Rgb parse_hex_color(std::string_view text);

struct DetectionReport {
    double mean_ap = 0;                          // averaged over thresholds then categories
    std::map<double, double> per_threshold;      // threshold -> AP averaged over categories
    std::map<std::string, double> per_category;  // category -> AP averaged over thresholds
};

inline std::vector<double> coco_thresholds() {
    return {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
}

// Greedy rank-order matching per category and threshold (each ground truth
// usable once, match requires IoU >= t and equal category), AP via 101-point
// interpolation, averaged over the categories present in the ground truth.
DetectionReport mean_average_precision(std::span<const DetectionCase> cases,
                                       const CategoryTaxonomy& taxonomy,
                                       const std::vector<double>& thresholds = coco_thresholds());

enum class CoordMode { Pixel, UnitInterval, Thousandths };

BoundingBox normalize_coordinates(const BoundingBox& box, double image_width,
                                  double image_height, CoordMode mode);
BoundingBox denormalize_coordinates(const BoundingBox& box, double image_width,
                                    double image_height, CoordMode mode);

// Clamps the box to [0,w] x [0,h].
BoundingBox clamp_to_image(const BoundingBox& box, double image_width, double image_height);

// ---- JSON record adapters (JSON-Lines evaluation files) ----

// {"image_size":[w,h],"ground_truth":[{"category":..,"box":[4]},..],
//  "predictions":[..]}; a box may also be a <box_start>..<box_end> token
// string. coord_mode denormalizes prediction boxes to pixels.
DetectionCase detection_case_from_json(const nlohmann::json& j,
                                       CoordMode coord_mode = CoordMode::Pixel);

// {"gt_category":..,"pred_category":..,"gt_text":..,"pred_text":..,
//  "gt_color":[r,g,b]|"#hex","pred_color":..,"format_ok":bool}
ReferringRecord referring_record_from_json(const nlohmann::json& j);

}  // namespace uidsl::metrics
