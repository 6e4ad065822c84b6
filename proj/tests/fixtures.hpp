#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uidsl/dsl.hpp"
#include "uidsl/metrics.hpp"

// Shared test data: the gradient event-card sample document, the published
// generation score table, and deterministic random generators.

namespace fixtures {

// Gradient promo card: one img, an h2 + four p text block with five
// Data-bound fields (title, eventDescription, dateRange, location, price),
// and a Learn More link.
inline const char* event_card_json() {
    return R"json({"type": "Tag", "name": "div", "className": "flex flex-col items-center justify-center bg-gradient-to-r from-pink-500 to-orange-500 rounded-3xl shadow-lg w-full max-w-sm p-4", "children": [{"type": "Tag", "name": "img", "className": "w-full h-48 object-cover rounded-2xl mb-4", "params": {"src": {"bindType": "Static", "value": "mockImageUrl"}}}, {"type": "Tag", "name": "div", "className": "text-center", "children": [{"type": "Tag", "name": "h2", "className": "text-xl font-bold text-white mb-2", "params": {"textContent": {"bindType": "Data", "bindField": "title"}}}, {"type": "Tag", "name": "p", "className": "text-base text-white mb-2", "params": {"textContent": {"bindType": "Data", "bindField": "eventDescription"}}}, {"type": "Tag", "name": "p", "className": "text-base text-white mb-2", "params": {"textContent": {"bindType": "Data", "bindField": "dateRange"}}}, {"type": "Tag", "name": "p", "className": "text-base text-white mb-2", "params": {"textContent": {"bindType": "Data", "bindField": "location"}}}, {"type": "Tag", "name": "p", "className": "text-xl font-bold text-white", "params": {"textContent": {"bindType": "Data", "bindField": "price"}}}]}, {"type": "Tag", "name": "a", "className": "mt-4 inline-flex items-center justify-center font-medium transition-colors focus: outline-none focus: ring-2 focus: ring-offset-2 disabled: opacity-50 disabled: pointer-events-none bg-blue-600 text-white hover: bg-blue-700 active: bg-blue-800 rounded-3xl py-2 px-4 border-0", "params": {"href": {"bindType": "Static", "value": "#"}, "textContent": {"bindType": "Static", "value": "Learn More"}}}]})json";
}

inline const char* event_card_data_json() {
    return R"json({"title": "Spring Fair", "eventDescription": "A weekend of music and food",
                   "dateRange": "Apr 12 - Apr 14", "location": "Riverside Park", "price": "$5"})json";
}

struct ScoreRow {
    const char* label;
    std::array<double, 6> components;
    double total;
};

// Published generation-score rows: six 0-10 components and their totals.
inline const std::vector<ScoreRow>& generation_score_rows() {
    static const std::vector<ScoreRow> kRows = {
        {"gpt-4o", {8.80, 8.97, 6.36, 6.59, 6.82, 6.22}, 43.76},
        {"claude-3.7-sonnet", {8.80, 9.02, 6.90, 7.11, 6.49, 6.76}, 45.08},
        {"gemini-2.5-pro", {8.70, 8.95, 7.00, 6.92, 6.60, 6.63}, 44.80},
        {"qwen2.5-vl-72b", {8.10, 8.92, 6.28, 6.63, 6.16, 6.06}, 42.15},
        {"sft-adapter-llm-understanding-only", {8.60, 4.53, 4.30, 5.35, 4.85, 4.53}, 32.16},
        {"sft-llm-only", {8.60, 8.87, 4.34, 5.28, 5.12, 4.44}, 36.65},
        {"sft-adapter-llm", {8.60, 8.83, 4.38, 5.21, 5.05, 4.63}, 36.70},
        {"sft-vit-adapter-llm", {8.60, 8.90, 4.52, 5.47, 4.80, 4.65}, 36.94},
        {"sft-grpo", {9.10, 8.86, 4.64, 5.33, 4.77, 4.64}, 37.34},
        {"sft-dpo", {9.50, 8.92, 5.70, 6.29, 6.47, 5.65}, 42.53},
        {"final-7b", {9.30, 8.91, 5.71, 6.17, 6.28, 5.65}, 42.02},
    };
    return kRows;
}

// Deterministic generator of schema-valid DSL documents exercising nesting,
// params, bindings, unicode text and void elements.
class DocGen {
public:
    explicit DocGen(std::uint64_t seed) : rng_(seed) {}

    uidsl::dsl::DslNode tree() { return node(0); }

    std::string document() { return uidsl::dsl::serialize(node(0)); }

private:
    std::mt19937_64 rng_;

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    std::string text_value() {
        static const std::vector<std::string> kTexts = {
            "Learn More",
            "Sommerfest 2024",
            "50% off \"today\" only",
            "a\\b and a/b",
            "line\nbreak\ttab",
            "新品上市",
            "детали",
            "emoji \xF0\x9F\x8E\x89 party",
            "price: $5 < $10 & more",
        };
        return kTexts[pick(kTexts.size())];
    }

    std::string class_tokens() {
        static const std::vector<std::string> kTokens = {
            "flex", "flex-col", "items-center", "justify-center", "rounded-3xl", "shadow-lg",
            "w-full", "p-4", "text-xl", "font-bold", "text-white", "mb-2",
            "bg-gradient-to-r", "from-pink-500", "to-orange-500"};
        std::string out;
        const std::size_t n = 1 + pick(4);
        for (std::size_t i = 0; i < n; ++i) {
            if (i) out += ' ';
            out += kTokens[pick(kTokens.size())];
        }
        return out;
    }

    std::string bind_path() {
        static const std::vector<std::string> kPaths = {
            "title", "eventDescription", "items[0].name", "items[2].price",
            "promotions[0].title", "user.profile.displayName"};
        return kPaths[pick(kPaths.size())];
    }

    uidsl::dsl::ParamValue param_value() {
        switch (pick(5)) {
            case 0: return uidsl::dsl::ParamValue::data_binding(bind_path());
            case 1: return uidsl::dsl::ParamValue::static_value(static_cast<std::int64_t>(pick(2000)));
            case 2: return uidsl::dsl::ParamValue::static_value(pick(2) == 0);
            case 3: return uidsl::dsl::ParamValue::static_value(0.5 + static_cast<double>(pick(100)) / 8.0);
            default: return uidsl::dsl::ParamValue::static_value(text_value());
        }
    }

    uidsl::dsl::DslNode node(int depth) {
        static const std::vector<std::string> kContainers = {
            "div", "span", "section", "ul", "li", "p", "h2", "a", "button", "footer"};
        static const std::vector<std::string> kVoids = {"img", "br", "hr"};

        uidsl::dsl::DslNode n;
        n.type = uidsl::dsl::NodeType::Tag;
        const bool leaf = depth >= 3 || pick(4) == 0;
        const bool void_leaf = leaf && pick(3) == 0;
        n.name = void_leaf ? kVoids[pick(kVoids.size())] : kContainers[pick(kContainers.size())];
        if (pick(4) != 0) {
            n.class_name = class_tokens();
        }
        uidsl::dsl::ParamMap params;
        if (void_leaf) {
            if (n.name == "img") {
                params.emplace("src", param_value());
                if (pick(2) == 0) params.emplace("alt", param_value());
            }
        } else {
            if (pick(2) == 0) params.emplace("textContent", param_value());
            if (pick(4) == 0) params.emplace("href", param_value());
            if (pick(5) == 0) params.emplace("title", param_value());
        }
        if (!params.empty()) {
            n.params = std::move(params);
        }
        if (!leaf) {
            std::vector<uidsl::dsl::DslNode> children;
            const std::size_t count = 1 + pick(4);
            for (std::size_t i = 0; i < count; ++i) {
                children.push_back(node(depth + 1));
            }
            n.children = std::move(children);
        }
        return n;
    }
};

inline uidsl::metrics::BoundingBox random_box(std::mt19937_64& rng, double max_coord,
                                              const std::vector<std::string>& categories) {
    auto coord = [&](double lim) { return static_cast<double>(rng() % static_cast<std::uint64_t>(lim)); };
    uidsl::metrics::BoundingBox b;
    b.x_min = coord(max_coord);
    b.y_min = coord(max_coord);
    b.x_max = b.x_min + 1 + coord(max_coord / 2);
    b.y_max = b.y_min + 1 + coord(max_coord / 2);
    b.category = categories[rng() % categories.size()];
    return b;
}

inline uidsl::metrics::DetectionCase random_case(std::mt19937_64& rng, std::size_t max_per_side,
                                                 bool allow_empty_sides) {
    static const std::vector<std::string> kCats = {"icon", "text", "image", "close"};
    uidsl::metrics::DetectionCase c;
    c.image_width = 200;
    c.image_height = 200;
    const std::size_t min_count = allow_empty_sides ? 0 : 1;
    const std::size_t n = min_count + rng() % (max_per_side - min_count + 1);
    const std::size_t m = min_count + rng() % (max_per_side - min_count + 1);
    for (std::size_t i = 0; i < n; ++i) {
        c.ground_truth.push_back(random_box(rng, 100, kCats));
    }
    for (std::size_t j = 0; j < m; ++j) {
        c.predictions.push_back(random_box(rng, 100, kCats));
    }
    return c;
}

}  // namespace fixtures
