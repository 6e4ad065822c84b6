#include "uidsl/dataprep.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

namespace uidsl::prep {

namespace {

constexpr std::string_view kBoxStart = "<box_start>";
constexpr std::string_view kBoxEnd = "<box_end>";

// Round-half-up to the nearest multiple of 28, for non-negative input.
std::int64_t round_nearest_28(std::int64_t v) {
    return (v + kResizeFactor / 2) / kResizeFactor * kResizeFactor;
}

const std::vector<std::string>& grounding_templates() {
    static const std::vector<std::string> kTemplates = {
        "List all the {category} items.",
        "Please list all the {category} in the image.",
        "Identify every {category} present in this picture.",
        "List all {category} shown in the image.",
        "Enumerate each {category} in the provided photo.",
        "What are all the {category} in this image? Please enumerate.",
        "Provide all {category} types found in this picture.",
        "Can you list every {category} appearing in this image?",
        "Give a detailed list of every {category} in the picture.",
        "Please identify all of the {category} in the image.",
        "List every type and position of {category} displayed in the image.",
    };
    return kTemplates;
}

const std::vector<std::string>& referring_templates() {
    static const std::vector<std::string> kTemplates = {
        "Describe the region {box}.",
        "Describe the categories and properties of the UI in area {box}.",
        "List the types and characteristics of UI elements in region {box}.",
        "Provide details on the UI types and their attributes within area {box}.",
        "Explain the categories and features of the UI components in region {box}.",
        "Summarize the types and properties of UI present in area {box}.",
    };
    return kTemplates;
}

const std::vector<std::string>& ocr_templates() {
    static const std::vector<std::string> kTemplates = {
        "Describe the text present in area {box}.",
        "List all the textual information in area {box}.",
        "Please detail any text found in area {box}.",
        "What text appears in region {box}? Please explain.",
        "Summarize the main textual content in region {box}.",
    };
    return kTemplates;
}

const std::vector<std::string>& text_color_templates() {
    static const std::vector<std::string> kTemplates = {
        "Describe the text colors in region {box}.",
        "List all text colors found in area {box}.",
        "What text colors are used in region {box}? ",
        "Summarize the colors of the text in region {box}.",
        "Please state the colors of various texts in area {box}.",
    };
    return kTemplates;
}

const std::vector<std::string>& caption_templates() {
    static const std::vector<std::string> kTemplates = {
        "Describe this UI image.",
        "Please describe this UI image.",
        "Introduce the content of this UI image.",
        "Explain in detail the content displayed in this UI image.",
        "Please analyze the content of this UI image.",
    };
    return kTemplates;
}

const std::vector<std::string>& generation_templates() {
    static const std::vector<std::string> kTemplates = {
        "Design a UI card to showcase the details of {ui_description}",
        "Design a concise, clear, and visually appealing UI card to display{ui_description}",
        "Design a UI card to display {ui_description}",
        "Please design a UI card displaying {ui_description}",
        "Please generate a UI card to guide users to the {ui_description}",
        "Design a UI card to showcase the details of {ui_description}. The following is the mock "
        "data for the UI card.{mock_data}",
        "Design a concise, clear, and visually appealing UI card to display{ui_description}. The "
        "following is the mock data for the UI card.{mock_data}",
        "Design a UI card to display {ui_description}. The following is the mock data for the UI "
        "card.{mock_data}",
        "Please design a UI card displaying {ui_description}. The following is the mock data for "
        "the UI card.{mock_data}",
        "Please generate a UI card to guide users to the {ui_description}. The following is the "
        "mock data for the UI card.{mock_data}",
    };
    return kTemplates;
}

bool parse_int_field(std::string_view body, std::size_t& i, std::int64_t& out) {
    while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < body.size() && body[i] >= '0' && body[i] <= '9') ++i;
    if (i == start || i - start > 10) {
        return false;
    }
    out = 0;
    for (std::size_t k = start; k < i; ++k) {
        out = out * 10 + (body[k] - '0');
    }
    while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
    return true;
}

// Body grammar between the special tokens: ( x , y ) , ( x , y ) with
// optional spaces around the numbers.
bool parse_box_body(std::string_view body, metrics::BoundingBox& box) {
    std::size_t i = 0;
    std::int64_t v[4] = {0, 0, 0, 0};
    for (int pair = 0; pair < 2; ++pair) {
        if (pair == 1) {
            if (i >= body.size() || body[i] != ',') return false;
            ++i;
            while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
        }
        if (i >= body.size() || body[i] != '(') return false;
        ++i;
        if (!parse_int_field(body, i, v[pair * 2])) return false;
        if (i >= body.size() || body[i] != ',') return false;
        ++i;
        if (!parse_int_field(body, i, v[pair * 2 + 1])) return false;
        if (i >= body.size() || body[i] != ')') return false;
        ++i;
    }
    if (i != body.size()) {
        return false;
    }
    if (v[0] > v[2] || v[1] > v[3]) {
        return false;
    }
    box.x_min = static_cast<double>(v[0]);
    box.y_min = static_cast<double>(v[1]);
    box.x_max = static_cast<double>(v[2]);
    box.y_max = static_cast<double>(v[3]);
    return true;
}

}  // namespace

ImageSize smart_resize(ImageSize size) {
    if (size.width < 1 || size.height < 1) {
        throw DegenerateImageError("image dimensions must be at least 1x1");
    }
    std::int64_t w = std::max(kResizeFactor, round_nearest_28(size.width));
    std::int64_t h = std::max(kResizeFactor, round_nearest_28(size.height));
    const std::int64_t area = w * h;
    if (area > kMaxPixels) {
        const double scale = std::sqrt(static_cast<double>(kMaxPixels) /
                                       static_cast<double>(area));
        const auto down = [scale](std::int64_t v) {
            return static_cast<std::int64_t>(
                       std::floor(static_cast<double>(v) * scale /
                                  static_cast<double>(kResizeFactor))) *
                   kResizeFactor;
        };
        w = down(w);
        h = down(h);
        if (w == 0 || h == 0) {
            throw DegenerateImageError(
                "aspect ratio too extreme: a dimension collapsed to 0 while shrinking into the "
                "area window");
        }
    } else if (area < kMinPixels) {
        const double scale = std::sqrt(static_cast<double>(kMinPixels) /
                                       static_cast<double>(area));
        const auto up = [scale](std::int64_t v) {
            return static_cast<std::int64_t>(
                       std::ceil(static_cast<double>(v) * scale /
                                 static_cast<double>(kResizeFactor))) *
                   kResizeFactor;
        };
        w = up(w);
        h = up(h);
    }
    return ImageSize{w, h};
}

std::string emit_box_tokens(const metrics::BoundingBox& box) {
    const auto n = [](double v) { return std::to_string(std::llround(v)); };
    std::string out;
    out += kBoxStart;
    out += '(' + n(box.x_min) + ", " + n(box.y_min) + "),(" + n(box.x_max) + ", " + n(box.y_max) +
           ')';
    out += kBoxEnd;
    return out;
}

std::vector<metrics::BoundingBox> parse_box_tokens(std::string_view text, bool strict) {
    std::vector<metrics::BoundingBox> boxes;
    std::size_t pos = 0;
    while (true) {
        const std::size_t start = text.find(kBoxStart, pos);
        if (start == std::string_view::npos) {
            break;
        }
        const std::size_t body_start = start + kBoxStart.size();
        const std::size_t end = text.find(kBoxEnd, body_start);
        if (end == std::string_view::npos) {
            if (strict) {
                throw BoxTokenSyntaxError("box token is never closed", start);
            }
            pos = body_start;
            continue;
        }
        metrics::BoundingBox box;
        if (parse_box_body(text.substr(body_start, end - body_start), box)) {
            boxes.push_back(std::move(box));
        } else if (strict) {
            throw BoxTokenSyntaxError("malformed box token body", start);
        }
        pos = end + kBoxEnd.size();
    }
    return boxes;
}

std::vector<metrics::BoundingBox> sort_boxes(std::vector<metrics::BoundingBox> boxes) {
    std::map<std::string, std::size_t> freq;
    for (const metrics::BoundingBox& b : boxes) {
        ++freq[b.category];
    }
    std::stable_sort(boxes.begin(), boxes.end(),
                     [&freq](const metrics::BoundingBox& a, const metrics::BoundingBox& b) {
                         if (a.category != b.category) {
                             const std::size_t fa = freq.at(a.category);
                             const std::size_t fb = freq.at(b.category);
                             if (fa != fb) {
                                 return fa > fb;
                             }
                             return a.category < b.category;
                         }
                         return std::tie(a.y_min, a.x_min) < std::tie(b.y_min, b.x_min);
                     });
    return boxes;
}

const char* to_string(Task t) {
    switch (t) {
        case Task::Referring: return "referring";
        case Task::Grounding: return "grounding";
        case Task::Ocr: return "ocr";
        case Task::TextColor: return "text_color";
        case Task::Caption: return "caption";
        case Task::Generation: return "generation";
    }
    return "?";
}

std::optional<Task> task_from_string(std::string_view name) {
    if (name == "referring") return Task::Referring;
    if (name == "grounding") return Task::Grounding;
    if (name == "ocr") return Task::Ocr;
    if (name == "text_color" || name == "text-color") return Task::TextColor;
    if (name == "caption") return Task::Caption;
    if (name == "generation") return Task::Generation;
    return std::nullopt;
}

const std::vector<std::string>& templates_for(Task t) {
    switch (t) {
        case Task::Referring: return referring_templates();
        case Task::Grounding: return grounding_templates();
        case Task::Ocr: return ocr_templates();
        case Task::TextColor: return text_color_templates();
        case Task::Caption: return caption_templates();
        case Task::Generation: return generation_templates();
    }
    return caption_templates();  // unreachable
}

std::string expand_templates(Task t, const std::map<std::string, std::string>& slots,
                             std::optional<std::size_t> template_index, std::uint64_t seed) {
    const std::vector<std::string>& templates = templates_for(t);
    std::size_t index;
    if (template_index) {
        index = *template_index;
        if (index >= templates.size()) {
            throw RangeError("template index " + std::to_string(index) + " out of range (task " +
                             to_string(t) + " has " + std::to_string(templates.size()) +
                             " templates)");
        }
    } else {
        // mt19937_64 is fully specified by the standard; modulo keeps the
        // choice reproducible across platforms, unlike the std distributions.
        std::mt19937_64 rng(seed);
        index = static_cast<std::size_t>(rng() % templates.size());
    }
    const std::string& tpl = templates[index];
    std::string out;
    out.reserve(tpl.size() + 32);
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl[i] != '{') {
            out += tpl[i++];
            continue;
        }
        const std::size_t close = tpl.find('}', i + 1);
        if (close == std::string::npos) {
            out += tpl[i++];
            continue;
        }
        const std::string slot = tpl.substr(i + 1, close - i - 1);
        auto it = slots.find(slot);
        if (it == slots.end()) {
            throw MissingSlotError("template needs a value for slot {" + slot + "}");
        }
        out += it->second;
        i = close + 1;
    }
    return out;
}

std::set<std::string> flag_hard_samples(
    const std::map<std::string, std::vector<bool>>& results) {
    std::set<std::string> hard;
    for (const auto& [id, trials] : results) {
        if (trials.empty()) {
            throw RangeError("sample \"" + id + "\" has no trials");
        }
        for (bool correct : trials) {
            if (!correct) {
                hard.insert(id);
                break;
            }
        }
    }
    return hard;
}

}  // namespace uidsl::prep
