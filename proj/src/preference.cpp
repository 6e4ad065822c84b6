#include "uidsl/preference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "uidsl/dsl.hpp"
#include "uidsl/render.hpp"

namespace uidsl::pref {

namespace {

using nlohmann::json;

const char* kComponentNames[6] = {"format_accuracy",     "reference_similarity",
                                  "visual_structure",    "color_aesthetic",
                                  "textual_consistency", "interface_interactivity"};

// -log sigmoid(x) without overflow on either tail.
double neg_log_sigmoid(double x) {
    if (x >= 0.0) {
        return std::log1p(std::exp(-x));
    }
    return -x + std::log1p(std::exp(x));
}

bool renderable(const std::string& dsl_text) {
    try {
        const dsl::DslNode root = dsl::parse_document(dsl_text);
        return render::check_renderable(root).renderable;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

GenerationScoreCard aggregate_score(const std::array<double, 6>& components) {
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (!(components[i] >= 0.0 && components[i] <= 10.0)) {
            throw RangeError(std::string(kComponentNames[i]) + " must be in [0, 10], got " +
                             std::to_string(components[i]));
        }
    }
    GenerationScoreCard card;
    card.format_accuracy = components[0];
    card.reference_similarity = components[1];
    card.visual_structure = components[2];
    card.color_aesthetic = components[3];
    card.textual_consistency = components[4];
    card.interface_interactivity = components[5];
    card.total = components[0] + components[1] + components[2] + components[3] + components[4] +
                 components[5];
    return card;
}

std::vector<PreferencePair> build_pairs(std::span<const Candidate> candidates,
                                        double high_threshold, double low_threshold,
                                        PairBuildSummary* summary) {
    if (!(low_threshold < high_threshold)) {
        throw RangeError("low_threshold must be below high_threshold");
    }
    struct Entry {
        const Candidate* candidate;
        std::optional<GenerationScoreCard> score;
        bool renders = false;
    };
    // Group by query id, keeping input order within each query.
    std::map<std::string, std::vector<Entry>> by_query;
    for (const Candidate& c : candidates) {
        Entry e{&c, std::nullopt, renderable(c.dsl_text)};
        if (c.components) {
            e.score = aggregate_score(*c.components);
        }
        by_query[c.query_id].push_back(std::move(e));
    }

    PairBuildSummary stats;
    stats.queries_total = by_query.size();
    std::vector<PreferencePair> pairs;
    for (const auto& [query_id, entries] : by_query) {
        std::vector<const Entry*> winners;
        std::vector<std::pair<const Entry*, LoserReason>> losers;
        for (const Entry& e : entries) {
            if (!e.renders) {
                losers.emplace_back(&e, LoserReason::RenderFailure);
            } else if (e.score && e.score->total >= high_threshold) {
                winners.push_back(&e);
            } else if (e.score && e.score->total <= low_threshold) {
                losers.emplace_back(&e, LoserReason::LowScore);
            } else {
                // Renderable but unscored (marked failed upstream) or mid-band.
                ++stats.candidates_skipped;
            }
        }
        if (winners.empty() || losers.empty()) {
            continue;
        }
        ++stats.queries_paired;
        for (const Entry* w : winners) {
            for (const auto& [l, reason] : losers) {
                PreferencePair pair;
                pair.query_id = query_id;
                pair.query = w->candidate->query;
                pair.winner = w->candidate->dsl_text;
                pair.loser = l->candidate->dsl_text;
                pair.winner_score = *w->score;
                pair.loser_reason = reason;
                pairs.push_back(std::move(pair));
            }
        }
    }
    stats.pairs_built = pairs.size();
    if (summary) {
        *summary = stats;
    }
    return pairs;
}

double dpo_loss(const LossInputs& inputs) {
    if (!(inputs.beta > 0.0)) {
        throw RangeError("beta must be positive");
    }
    const double winner_ratio = inputs.logp_policy_winner - inputs.logp_ref_winner;
    const double loser_ratio = inputs.logp_policy_loser - inputs.logp_ref_loser;
    return neg_log_sigmoid(inputs.beta * (winner_ratio - loser_ratio));
}

double sft_loss(std::span<const double> token_logps) {
    if (token_logps.empty()) {
        throw EmptySequenceError("SFT loss needs at least one token log-probability");
    }
    double sum = 0.0;
    for (double lp : token_logps) {
        sum -= lp;
    }
    return sum / static_cast<double>(token_logps.size());
}

double total_loss(const LossInputs& inputs) {
    if (inputs.lambda < 0.0) {
        throw RangeError("lambda must be non-negative");
    }
    const double dpo = dpo_loss(inputs);
    if (inputs.lambda == 0.0) {
        return dpo;
    }
    return dpo + inputs.lambda * sft_loss(inputs.sft_token_logps);
}

Candidate candidate_from_json(const json& j) {
    Candidate c;
    c.query_id = j.at("query_id").is_string() ? j.at("query_id").get<std::string>()
                                              : j.at("query_id").dump();
    c.query = j.value("query", "");
    c.dsl_text = j.at("dsl_text").get<std::string>();
    const json& comps = j.at("components");
    if (comps.is_string()) {
        if (comps.get<std::string>() != "render_failure") {
            throw SchemaError("components must be six reals or \"render_failure\"");
        }
        c.components = std::nullopt;
    } else if (comps.is_array() && comps.size() == 6) {
        std::array<double, 6> values{};
        for (std::size_t i = 0; i < 6; ++i) {
            values[i] = comps[i].get<double>();
        }
        c.components = values;
    } else {
        throw SchemaError("components must be six reals or \"render_failure\"");
    }
    return c;
}

json pair_to_json(const PreferencePair& pair) {
    json j;
    j["query_id"] = pair.query_id;
    j["query"] = pair.query;
    j["winner"] = pair.winner;
    j["loser"] = pair.loser;
    j["winner_total"] = pair.winner_score.total;
    const auto comps = pair.winner_score.components();
    j["winner_components"] = comps;
    j["loser_reason"] = pair.loser_reason == LoserReason::LowScore ? "LowScore" : "RenderFailure";
    return j;
}

}  // namespace uidsl::pref
