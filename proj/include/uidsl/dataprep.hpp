#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "uidsl/errors.hpp"
#include "uidsl/metrics.hpp"

// Deterministic dataset-preparation procedures: smart resize, box special
// tokens, grounding sort order, prompt-template expansion and hard-sample
// flagging.

namespace uidsl::prep {

struct ImageSize {
    std::int64_t width = 0;
    std::int64_t height = 0;
    bool operator==(const ImageSize&) const = default;
};

inline constexpr std::int64_t kResizeFactor = 28;
inline constexpr std::int64_t kMinPixels = 64 * 28 * 28;    // 50,176
inline constexpr std::int64_t kMaxPixels = 1280 * 28 * 28;  // 1,003,520

// Rounds each dimension to the nearest multiple of 28 (minimum 28), then
// rescales into the [kMinPixels, kMaxPixels] area window: down-rounding when
// shrinking, up-rounding when growing. Throws DegenerateImageError if a
// dimension would be forced to 0.
ImageSize smart_resize(ImageSize size);

// Exact format: <box_start>(x_min, y_min),(x_max, y_max)<box_end> with
// integer pixel coordinates.
std::string emit_box_tokens(const metrics::BoundingBox& box);

// Extracts every well-formed token occurrence, ignoring surrounding text.
// strict mode raises BoxTokenSyntaxError on a malformed occurrence; lenient
// mode skips it.
std::vector<metrics::BoundingBox> parse_box_tokens(std::string_view text, bool strict = false);

// Groups by category (descending frequency, ties lexicographic), then orders
// within each group by ascending (y_min, x_min). Stable; output is a
// permutation of the input.
std::vector<metrics::BoundingBox> sort_boxes(std::vector<metrics::BoundingBox> boxes);

enum class Task { Referring, Grounding, Ocr, TextColor, Caption, Generation };

const char* to_string(Task t);
std::optional<Task> task_from_string(std::string_view name);

// The embedded prompt-template catalog for one task.
const std::vector<std::string>& templates_for(Task t);

// Substitutes {category}/{box}/{ui_description}/{mock_data} slots into the
// chosen template. Without template_index the template is drawn uniformly
// from a generator seeded with `seed`. Throws MissingSlotError when the
// template references a slot with no value.
std::string expand_templates(Task t, const std::map<std::string, std::string>& slots,
                             std::optional<std::size_t> template_index = std::nullopt,
                             std::uint64_t seed = 0);

// A sample is hard iff any trial is incorrect. Every sample needs at least
// one trial.
std::set<std::string> flag_hard_samples(
    const std::map<std::string, std::vector<bool>>& results);

}  // namespace uidsl::prep
