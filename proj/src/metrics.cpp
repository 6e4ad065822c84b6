#include "uidsl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uidsl/dataprep.hpp"
#include "uidsl/dsl.hpp"

namespace uidsl::metrics {

namespace {

using nlohmann::json;

// UTF-8 to code points; bytes that do not form a valid sequence are taken
// one-by-one so the metric stays total on arbitrary model output.
std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        char32_t cp = c;
        if ((c & 0x80) == 0x00) {
            len = 1;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            out.push_back(c);
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back(c);
            ++i;
            continue;
        }
        bool ok = true;
        char32_t acc = cp;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            acc = (acc << 6) | (cc & 0x3F);
        }
        if (!ok) {
            out.push_back(c);
            ++i;
            continue;
        }
        out.push_back(acc);
        i += len;
    }
    return out;
}

std::size_t edit_distance(const std::vector<char32_t>& a, const std::vector<char32_t>& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// 101-point interpolated AP from the TP/FP sequence in rank order.
double ap_101(const std::vector<bool>& is_tp, std::size_t total_gt) {
    if (total_gt == 0) {
        return 0.0;
    }
    std::vector<double> recalls, precisions;
    recalls.reserve(is_tp.size());
    precisions.reserve(is_tp.size());
    std::size_t tp = 0, fp = 0;
    for (bool hit : is_tp) {
        hit ? ++tp : ++fp;
        recalls.push_back(static_cast<double>(tp) / static_cast<double>(total_gt));
        precisions.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    }
    double sum = 0.0;
    for (int level = 0; level <= 100; ++level) {
        const double r = static_cast<double>(level) / 100.0;
        double best = 0.0;
        for (std::size_t i = 0; i < recalls.size(); ++i) {
            if (recalls[i] >= r) {
                best = std::max(best, precisions[i]);
            }
        }
        sum += best;
    }
    return sum / 101.0;
}

BoundingBox scale_box(const BoundingBox& box, double sx, double sy) {
    BoundingBox out = box;
    out.x_min *= sx;
    out.x_max *= sx;
    out.y_min *= sy;
    out.y_max *= sy;
    return out;
}

BoundingBox box_from_json(const json& j) {
    BoundingBox box;
    if (j.is_object()) {
        if (j.contains("category")) {
            box.category = j.at("category").get<std::string>();
        } else if (j.contains("type")) {
            box.category = j.at("type").get<std::string>();
        }
        const json& b = j.at("box");
        if (b.is_string()) {
            auto parsed = prep::parse_box_tokens(b.get<std::string>(), /*strict=*/true);
            if (parsed.size() != 1) {
                throw SchemaError("box token string must contain exactly one box");
            }
            box.x_min = parsed[0].x_min;
            box.y_min = parsed[0].y_min;
            box.x_max = parsed[0].x_max;
            box.y_max = parsed[0].y_max;
            return box;
        }
        if (!b.is_array() || b.size() != 4) {
            throw SchemaError("box must be an array of 4 numbers");
        }
        box.x_min = b[0].get<double>();
        box.y_min = b[1].get<double>();
        box.x_max = b[2].get<double>();
        box.y_max = b[3].get<double>();
        return box;
    }
    throw SchemaError("box entry must be an object");
}

Rgb rgb_from_json(const json& j) {
    if (j.is_string()) {
        return parse_hex_color(j.get<std::string>());
    }
    if (j.is_array() && j.size() == 3) {
        return Rgb{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    }
    throw SchemaError("color must be [r,g,b] or a #hex string");
}

}  // namespace

const CategoryTaxonomy& CategoryTaxonomy::standard() {
    static const CategoryTaxonomy kStandard = make_taxonomy(
        {"checkedBox", "uncheckedBox", "checkTextView", "close", "dropDown", "editText",
         "icon", "image", "more", "NonselectabletextButton", "SelectabletextButton", "popup",
         "progress", "switch", "return", "checkedText", "uncheckedText", "text", "textButton"},
        {"SelectabletextButton", "close", "popup", "checkedText", "checkTextView"});
    return kStandard;
}

bool CategoryTaxonomy::contains(std::string_view name) const {
    return std::find(categories.begin(), categories.end(), name) != categories.end();
}

CategoryTaxonomy make_taxonomy(std::vector<std::string> categories,
                               std::set<std::string> hard_categories) {
    if (categories.size() != 19) {
        throw RangeError("taxonomy must have exactly 19 categories, got " +
                         std::to_string(categories.size()));
    }
    for (const std::string& h : hard_categories) {
        if (std::find(categories.begin(), categories.end(), h) == categories.end()) {
            throw RangeError("hard category \"" + h + "\" is not in the taxonomy");
        }
    }
    CategoryTaxonomy t;
    t.categories = std::move(categories);
    t.hard_categories = std::move(hard_categories);
    return t;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) {
        return 0.0;
    }
    return inter / uni;
}

double recall_iou_reward(const DetectionCase& c) {
    if (c.ground_truth.empty()) {
        throw EmptyGroundTruthError("recall IoU reward needs at least one ground-truth box");
    }
    double sum = 0.0;
    for (const BoundingBox& gt : c.ground_truth) {
        double best = 0.0;
        for (const BoundingBox& pred : c.predictions) {
            best = std::max(best, iou(pred, gt));
        }
        sum += best;
    }
    return sum / static_cast<double>(c.ground_truth.size());
}

double precision_iou_reward(const DetectionCase& c) {
    if (c.predictions.empty()) {
        throw EmptyPredictionError("precision IoU reward needs at least one predicted box");
    }
    double sum = 0.0;
    for (const BoundingBox& pred : c.predictions) {
        double best = 0.0;
        for (const BoundingBox& gt : c.ground_truth) {
            best = std::max(best, iou(gt, pred));
        }
        sum += best;
    }
    return sum / static_cast<double>(c.predictions.size());
}

double grounding_reward(const DetectionCase& c, bool format_ok) {
    const bool no_gt = c.ground_truth.empty();
    const bool no_pred = c.predictions.empty();
    double recall_term;
    double precision_term;
    if (no_gt) {
        // Nothing to find: recall is vacuously perfect, stray predictions
        // forfeit the precision term.
        recall_term = 1.0;
        precision_term = no_pred ? 1.0 : 0.0;
    } else {
        recall_term = recall_iou_reward(c);
        precision_term = no_pred ? 0.0 : precision_iou_reward(c);
    }
    return recall_term + precision_term + (format_ok ? 1.0 : 0.0);
}

int format_reward(std::string_view raw_output, OutputSchema schema) {
    if (schema == OutputSchema::DslDocument) {
        try {
            const dsl::DslNode root = dsl::parse_document(raw_output);
            return dsl::validate(root, {}).valid ? 1 : 0;
        } catch (const Error&) {
            return 0;
        }
    }
    json j;
    try {
        j = json::parse(raw_output);
    } catch (const json::parse_error&) {
        return 0;
    }
    if (schema == OutputSchema::ReferringJson) {
        if (!j.is_object() || j.size() != 3) {
            return 0;
        }
        if (!j.contains("category") || !j["category"].is_string()) return 0;
        if (!j.contains("text") || !j["text"].is_string()) return 0;
        if (!j.contains("text_color") || !j["text_color"].is_array()) return 0;
        for (const json& c : j["text_color"]) {
            if (!c.is_string()) return 0;
        }
        return 1;
    }
    // GroundingJson
    if (!j.is_array()) {
        return 0;
    }
    for (const json& item : j) {
        if (!item.is_object() || item.size() != 2) return 0;
        if (!item.contains("type") || !item["type"].is_string()) return 0;
        if (!item.contains("box") || !item["box"].is_array() || item["box"].size() != 4) return 0;
        for (const json& v : item["box"]) {
            if (!v.is_number()) return 0;
        }
    }
    return 1;
}

double referring_reward(const ReferringRecord& record, const CategoryTaxonomy& taxonomy) {
    (void)taxonomy;  // category comparison is exact string equality
    const double acc = record.pred_category == record.gt_category ? 1.0 : 0.0;
    const double fmt = record.format_ok ? 1.0 : 0.0;
    return acc + fmt;
}

double ocr_accuracy(std::string_view gt_text, std::string_view pred_text) {
    const std::vector<char32_t> gt = decode_utf8(gt_text);
    const std::vector<char32_t> pred = decode_utf8(pred_text);
    const double total = static_cast<double>(std::max<std::size_t>(1, gt.size()));
    const double diff = static_cast<double>(edit_distance(gt, pred));
    return std::max(0.0, 1.0 - diff / total);
}

double color_distance(const Rgb& gt, const Rgb& pred) {
    const double dr = (pred.r - gt.r) / 255.0;
    const double dg = (pred.g - gt.g) / 255.0;
    const double db = (pred.b - gt.b) / 255.0;
    return dr * dr + dg * dg + db * db;
}

double color_score(const Rgb& gt, const Rgb& pred) {
    return 1.0 - color_distance(gt, pred) / 3.0;
}

Rgb parse_hex_color(std::string_view text) {
    if (!text.empty() && text.front() == '#') {
        text.remove_prefix(1);
    }
    auto byte_at = [&](std::size_t i) {
        const int hi = hex_digit(text[i * 2]);
        const int lo = hex_digit(text[i * 2 + 1]);
        if (hi < 0 || lo < 0) {
            throw SchemaError("invalid hex color digit");
        }
        return static_cast<double>(hi * 16 + lo);
    };
    if (text.size() == 6) {
        return Rgb{byte_at(0), byte_at(1), byte_at(2)};
    }
    if (text.size() == 3) {
        auto nibble = [&](std::size_t i) {
            const int v = hex_digit(text[i]);
            if (v < 0) {
                throw SchemaError("invalid hex color digit");
            }
            return static_cast<double>(v * 17);
        };
        return Rgb{nibble(0), nibble(1), nibble(2)};
    }
    throw SchemaError("hex color must be #rgb or #rrggbb");
}

DetectionReport mean_average_precision(std::span<const DetectionCase> cases,
                                       const CategoryTaxonomy& taxonomy,
                                       const std::vector<double>& thresholds) {
    (void)taxonomy;  // free-form categories are evaluated too
    DetectionReport report;
    std::set<std::string> categories;
    for (const DetectionCase& c : cases) {
        for (const BoundingBox& gt : c.ground_truth) {
            categories.insert(gt.category);
        }
    }
    if (categories.empty() || thresholds.empty()) {
        return report;
    }

    // Predictions carry no confidence; the list position within a case is the
    // decreed rank, merged across cases as (rank asc, case asc).
    struct RankedPred {
        std::size_t rank;
        std::size_t case_idx;
        const BoundingBox* box;
    };

    std::map<std::string, double> per_category_sum;
    std::map<double, double> per_threshold_sum;
    for (double t : thresholds) {
        per_threshold_sum[t] = 0.0;
    }

    for (const std::string& cat : categories) {
        std::vector<RankedPred> preds;
        std::vector<std::vector<const BoundingBox*>> gt_by_case(cases.size());
        std::size_t total_gt = 0;
        for (std::size_t ci = 0; ci < cases.size(); ++ci) {
            for (const BoundingBox& gt : cases[ci].ground_truth) {
                if (gt.category == cat) {
                    gt_by_case[ci].push_back(&gt);
                    ++total_gt;
                }
            }
            for (std::size_t pi = 0; pi < cases[ci].predictions.size(); ++pi) {
                if (cases[ci].predictions[pi].category == cat) {
                    preds.push_back({pi, ci, &cases[ci].predictions[pi]});
                }
            }
        }
        std::stable_sort(preds.begin(), preds.end(),
                         [](const RankedPred& a, const RankedPred& b) { return a.rank < b.rank; });

        double cat_sum = 0.0;
        for (double t : thresholds) {
            std::vector<std::vector<bool>> used(cases.size());
            for (std::size_t ci = 0; ci < cases.size(); ++ci) {
                used[ci].assign(gt_by_case[ci].size(), false);
            }
            std::vector<bool> is_tp;
            is_tp.reserve(preds.size());
            for (const RankedPred& p : preds) {
                double best = -1.0;
                std::size_t best_idx = 0;
                const auto& gts = gt_by_case[p.case_idx];
                for (std::size_t gi = 0; gi < gts.size(); ++gi) {
                    if (used[p.case_idx][gi]) {
                        continue;
                    }
                    const double v = iou(*p.box, *gts[gi]);
                    if (v > best) {
                        best = v;
                        best_idx = gi;
                    }
                }
                if (best >= t && best > 0.0) {
                    used[p.case_idx][best_idx] = true;
                    is_tp.push_back(true);
                } else {
                    is_tp.push_back(false);
                }
            }
            const double ap = ap_101(is_tp, total_gt);
            cat_sum += ap;
            per_threshold_sum[t] += ap;
        }
        per_category_sum[cat] = cat_sum / static_cast<double>(thresholds.size());
    }

    const double cat_count = static_cast<double>(categories.size());
    double total = 0.0;
    for (const auto& [cat, ap] : per_category_sum) {
        total += ap;
    }
    report.mean_ap = total / cat_count;
    report.per_category = std::move(per_category_sum);
    for (const auto& [t, sum] : per_threshold_sum) {
        report.per_threshold[t] = sum / cat_count;
    }
    return report;
}

BoundingBox normalize_coordinates(const BoundingBox& box, double image_width,
                                  double image_height, CoordMode mode) {
    switch (mode) {
        case CoordMode::Pixel:
            return box;
        case CoordMode::UnitInterval:
            return scale_box(box, 1.0 / image_width, 1.0 / image_height);
        case CoordMode::Thousandths:
            return scale_box(box, 1000.0 / image_width, 1000.0 / image_height);
    }
    return box;
}

BoundingBox denormalize_coordinates(const BoundingBox& box, double image_width,
                                    double image_height, CoordMode mode) {
    switch (mode) {
        case CoordMode::Pixel:
            return box;
        case CoordMode::UnitInterval:
            return scale_box(box, image_width, image_height);
        case CoordMode::Thousandths:
            return scale_box(box, image_width / 1000.0, image_height / 1000.0);
    }
    return box;
}

BoundingBox clamp_to_image(const BoundingBox& box, double image_width, double image_height) {
    BoundingBox out = box;
    out.x_min = std::clamp(out.x_min, 0.0, image_width);
    out.x_max = std::clamp(out.x_max, 0.0, image_width);
    out.y_min = std::clamp(out.y_min, 0.0, image_height);
    out.y_max = std::clamp(out.y_max, 0.0, image_height);
    return out;
}

DetectionCase detection_case_from_json(const json& j, CoordMode coord_mode) {
    DetectionCase c;
    const json& size = j.at("image_size");
    if (!size.is_array() || size.size() != 2) {
        throw SchemaError("image_size must be [width, height]");
    }
    c.image_width = size[0].get<double>();
    c.image_height = size[1].get<double>();
    if (c.image_width <= 0 || c.image_height <= 0) {
        throw SchemaError("image_size must be positive");
    }
    for (const json& g : j.value("ground_truth", json::array())) {
        c.ground_truth.push_back(clamp_to_image(box_from_json(g), c.image_width, c.image_height));
    }
    for (const json& p : j.value("predictions", json::array())) {
        BoundingBox box = box_from_json(p);
        box = denormalize_coordinates(box, c.image_width, c.image_height, coord_mode);
        c.predictions.push_back(clamp_to_image(box, c.image_width, c.image_height));
    }
    return c;
}

ReferringRecord referring_record_from_json(const json& j) {
    ReferringRecord r;
    r.gt_category = j.at("gt_category").get<std::string>();
    r.pred_category = j.value("pred_category", "");
    r.gt_text = j.value("gt_text", "");
    r.pred_text = j.value("pred_text", "");
    if (j.contains("gt_color")) {
        r.gt_color = rgb_from_json(j.at("gt_color"));
    }
    if (j.contains("pred_color")) {
        r.pred_color = rgb_from_json(j.at("pred_color"));
    }
    if (j.contains("raw_output")) {
        r.format_ok =
            format_reward(j.at("raw_output").get<std::string>(), OutputSchema::ReferringJson) == 1;
    } else {
        r.format_ok = j.value("format_ok", true);
    }
    return r;
}

}  // namespace uidsl::metrics
