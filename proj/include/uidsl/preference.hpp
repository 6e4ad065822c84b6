#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "uidsl/errors.hpp"

// Generation-quality score aggregation, DPO preference-pair construction and
// the DPO/SFT loss functions as pure scalar math over supplied
// log-probabilities.

namespace uidsl::pref {

struct GenerationScoreCard {
    double format_accuracy = 0;
    double reference_similarity = 0;  // externally supplied (e.g. embedding similarity)
    double visual_structure = 0;
    double color_aesthetic = 0;
    double textual_consistency = 0;
    double interface_interactivity = 0;
    double total = 0;

    std::array<double, 6> components() const {
        return {format_accuracy,   reference_similarity, visual_structure,
                color_aesthetic,   textual_consistency,  interface_interactivity};
    }
    bool operator==(const GenerationScoreCard&) const = default;
};

// Throws RangeError when a component is outside [0, 10].
GenerationScoreCard aggregate_score(const std::array<double, 6>& components);

struct Candidate {
    std::string query_id;
    std::string query;
    std::string dsl_text;
    // nullopt marks an upstream render failure (no scorecard possible).
    std::optional<std::array<double, 6>> components;
};

enum class LoserReason { LowScore, RenderFailure };

struct PreferencePair {
    std::string query_id;
    std::string query;
    std::string winner;  // DSL text
    std::string loser;   // DSL text
    GenerationScoreCard winner_score;
    LoserReason loser_reason = LoserReason::LowScore;
};

struct PairBuildSummary {
    std::size_t queries_total = 0;
    std::size_t queries_paired = 0;
    std::size_t pairs_built = 0;
    std::size_t candidates_skipped = 0;  // unusable: marked failed yet renderable, or mid-band score
};

inline constexpr double kDefaultHighThreshold = 42.0;
inline constexpr double kDefaultLowThreshold = 30.0;

// Winners: renderable candidates with total >= high. Losers: scored
// candidates with total <= low, plus candidates failing check_renderable.
// Emits the per-query cross product, ordered by query id then input order.
std::vector<PreferencePair> build_pairs(std::span<const Candidate> candidates,
                                        double high_threshold = kDefaultHighThreshold,
                                        double low_threshold = kDefaultLowThreshold,
                                        PairBuildSummary* summary = nullptr);

struct LossInputs {
    double beta = 0.05;
    double lambda = 1.0;
    double logp_policy_winner = 0;
    double logp_ref_winner = 0;
    double logp_policy_loser = 0;
    double logp_ref_loser = 0;
    std::vector<double> sft_token_logps;
};

// -log sigmoid(beta * [(policy-ref winner ratio) - (policy-ref loser ratio)]),
// computed via log1p for stability at large |margin|.
double dpo_loss(const LossInputs& inputs);

// Mean of negated token log-probabilities. Throws EmptySequenceError on an
// empty list.
double sft_loss(std::span<const double> token_logps);

// dpo_loss + lambda * sft_loss. lambda == 0 returns dpo_loss bitwise and does
// not touch the token list.
double total_loss(const LossInputs& inputs);

// ---- JSON record adapters ----

// {"query_id":..,"query":..,"dsl_text":..,
//  "components":[6 reals] | "render_failure"}
Candidate candidate_from_json(const nlohmann::json& j);

nlohmann::json pair_to_json(const PreferencePair& pair);

}  // namespace uidsl::pref
