#include "reidbench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "reidbench/error.hpp"

namespace reidbench {

namespace {

// 1-based rank of the first correct match, or nullopt.
std::optional<std::size_t> first_match_rank(const QueryJudgment& judgment) {
    for (std::size_t i = 0; i < judgment.ranked_entities.size(); ++i)
        if (judgment.ranked_entities[i] == judgment.query_entity) return i + 1;
    return std::nullopt;
}

}  // namespace

const char* to_string(MapMode mode) {
    switch (mode) {
        case MapMode::MicroPerQuery: return "micro";
        case MapMode::MacroPerEntity: return "macro";
    }
    throw ContractError("invalid map mode enum value");
}

MapMode parse_map_mode(const std::string& token) {
    if (token == "micro") return MapMode::MicroPerQuery;
    if (token == "macro") return MapMode::MacroPerEntity;
    throw ValidationError("unknown map mode: '" + token + "' (expected 'micro' or 'macro')");
}

std::optional<double> average_precision(const QueryJudgment& judgment) {
    std::size_t matches = 0;
    double precision_sum = 0.0;
    for (std::size_t i = 0; i < judgment.ranked_entities.size(); ++i) {
        if (judgment.ranked_entities[i] == judgment.query_entity) {
            ++matches;
            precision_sum += static_cast<double>(matches) / static_cast<double>(i + 1);
        }
    }
    if (matches == 0) return std::nullopt;
    return precision_sum / static_cast<double>(matches);
}

MapResult mean_average_precision(std::span<const QueryJudgment> judgments, MapMode mode) {
    if (judgments.empty()) throw EvaluationError("mean_average_precision over an empty query list");

    MapResult result;
    if (mode == MapMode::MicroPerQuery) {
        double total = 0.0;
        std::size_t included = 0;
        for (const QueryJudgment& judgment : judgments) {
            if (const std::optional<double> ap = average_precision(judgment)) {
                total += *ap;
                ++included;
            } else {
                ++result.excluded;
            }
        }
        if (included == 0)
            throw EvaluationError("all queries excluded: no gallery positives for any query");
        result.value = total / static_cast<double>(included);
        return result;
    }

    // Macro: average per-entity mean APs so over-represented entities do
    // not dominate.
    std::map<int, std::pair<double, std::size_t>> per_entity;  // entity -> (AP sum, count)
    for (const QueryJudgment& judgment : judgments) {
        if (const std::optional<double> ap = average_precision(judgment)) {
            auto& [sum, count] = per_entity[judgment.query_entity];
            sum += *ap;
            ++count;
        } else {
            ++result.excluded;
        }
    }
    if (per_entity.empty())
        throw EvaluationError("all queries excluded: no gallery positives for any query");
    double total = 0.0;
    for (const auto& [entity, bucket] : per_entity)
        total += bucket.first / static_cast<double>(bucket.second);
    result.value = total / static_cast<double>(per_entity.size());
    return result;
}

std::map<int, double> cmc(std::span<const QueryJudgment> judgments, std::span<const int> ks) {
    if (ks.empty()) throw ContractError("cmc requires a nonempty rank set");
    for (const int k : ks)
        if (k < 1) throw ContractError("cmc rank values must be positive, got " + std::to_string(k));
    if (judgments.empty()) throw ContractError("cmc over an empty query list");

    std::vector<std::optional<std::size_t>> ranks;
    ranks.reserve(judgments.size());
    for (const QueryJudgment& judgment : judgments) ranks.push_back(first_match_rank(judgment));

    std::map<int, double> out;
    for (const int k : ks) {
        std::size_t hits = 0;
        for (const std::optional<std::size_t>& rank : ranks)
            if (rank && *rank <= static_cast<std::size_t>(k)) ++hits;
        out[k] = static_cast<double>(hits) / static_cast<double>(judgments.size());
    }
    return out;
}

SummaryStats summarize(std::span<const double> values) {
    if (values.empty()) throw ContractError("summarize over an empty value list");

    SummaryStats stats;
    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    stats.min = *min_it;
    stats.max = *max_it;

    double total = 0.0;
    for (const double v : values) total += v;
    stats.mean = total / static_cast<double>(values.size());

    double variance = 0.0;
    for (const double v : values) variance += (v - stats.mean) * (v - stats.mean);
    variance /= static_cast<double>(values.size());
    stats.stddev = std::sqrt(variance);
    return stats;
}

}  // namespace reidbench
