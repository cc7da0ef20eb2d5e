#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reidbench {

// One evaluated query: the entity labels of the gallery in ranked order.
struct QueryJudgment {
    std::string query_id;
    int query_entity = 0;
    std::vector<int> ranked_entities;
};

enum class MapMode { MicroPerQuery, MacroPerEntity };

const char* to_string(MapMode mode);
MapMode parse_map_mode(const std::string& token);

// AP = (1/P) Σ precision@r over ranks r holding a positive, P = positive
// count. nullopt when the ranking holds no positive at all ("no positive"
// signal; callers decide whether to exclude or fail).
std::optional<double> average_precision(const QueryJudgment& judgment);

struct MapResult {
    double value = 0.0;
    std::size_t excluded = 0;  // queries skipped for lack of any gallery positive
};

// Micro: mean of per-query AP. Macro: mean over entities of per-entity
// mean AP. Throws EvaluationError when nothing is left to average.
MapResult mean_average_precision(std::span<const QueryJudgment> judgments,
                                 MapMode mode = MapMode::MicroPerQuery);

// Rank-k accuracy for each k: fraction of queries whose first correct
// match sits at rank <= k. A query with no positive is a miss at every k.
std::map<int, double> cmc(std::span<const QueryJudgment> judgments, std::span<const int> ks);

struct SummaryStats {
    double max = 0.0;
    double min = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // population (divide by N); reported as "std"
};

SummaryStats summarize(std::span<const double> values);

// One table row: metrics of a single query day.
struct MetricRow {
    int query_day = 0;  // day_index
    std::string day_label;
    double map = 0.0;
    std::map<int, double> rank_acc;
    std::size_t excluded = 0;
};

}  // namespace reidbench
