#include "reidbench/runner.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "reidbench/error.hpp"
#include "reidbench/io.hpp"

namespace reidbench {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& known, const char* where) {
    for (const auto& [key, value] : j.items())
        if (!known.count(key))
            throw ValidationError(std::string(where) + ": unknown key '" + key + "'");
}

GalleryPolicy parse_policy(const json& j) {
    if (!j.is_object()) throw ValidationError("policy must be a JSON object");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fixed") {
        reject_unknown_keys(j, {"kind", "days"}, "policy");
        FixedPolicy policy;
        policy.days = j.at("days").get<std::vector<int>>();
        return policy;
    }
    if (kind == "cumulative") {
        reject_unknown_keys(j, {"kind", "start_day"}, "policy");
        CumulativePolicy policy;
        policy.start_day = j.at("start_day").get<int>();
        return policy;
    }
    if (kind == "rolling") {
        reject_unknown_keys(j, {"kind", "window"}, "policy");
        RollingPolicy policy;
        policy.window = j.at("window").get<int>();
        return policy;
    }
    throw ValidationError("unknown policy kind '" + kind +
                          "' (expected fixed, cumulative, or rolling)");
}

std::vector<int> normalize_ranks(std::vector<int> ranks) {
    if (ranks.empty()) throw ValidationError("ranks must be nonempty");
    for (const int k : ranks)
        if (k < 1) throw ValidationError("ranks must be positive, got " + std::to_string(k));
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    return ranks;
}

// Query rows go through the same binding checks as gallery rows.
void check_query_binding(const ImageRecord& rec, const EmbeddingMatrix& embeddings) {
    if (rec.row_index >= embeddings.count())
        throw BindingError("no embedding row for image '" + rec.image_id + "': row " +
                           std::to_string(rec.row_index) + " out of range (count " +
                           std::to_string(embeddings.count()) + ")");
    const std::string& stored_id = embeddings.row_ids[rec.row_index];
    if (!stored_id.empty() && stored_id != rec.image_id)
        throw BindingError("embedding row " + std::to_string(rec.row_index) + " is named '" +
                           stored_id + "' but the manifest binds it to '" + rec.image_id + "'");
}

}  // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    const std::string text = read_file(path, "experiment config");
    const std::string where = "experiment config " + path.string();
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw ValidationError(where + ": top level must be a JSON object");
        reject_unknown_keys(j,
                            {"experiment_name", "manifest", "embeddings", "policy", "metric",
                             "ranks", "map_mode", "output_dir", "seed"},
                            where.c_str());

        ExperimentConfig config;
        config.experiment_name = j.at("experiment_name").get<std::string>();
        if (config.experiment_name.empty())
            throw ValidationError(where + ": experiment_name must be nonempty");
        config.manifest_path = j.at("manifest").get<std::string>();
        if (!j.at("embeddings").is_object() || j.at("embeddings").empty())
            throw ValidationError(where + ": embeddings must be a nonempty object");
        for (const auto& [name, value] : j.at("embeddings").items())
            config.embeddings[name] = value.get<std::string>();
        config.policy = parse_policy(j.at("policy"));
        if (j.contains("metric")) config.metric = parse_metric(j.at("metric").get<std::string>());
        if (j.contains("ranks"))
            config.ranks = normalize_ranks(j.at("ranks").get<std::vector<int>>());
        if (j.contains("map_mode"))
            config.map_mode = parse_map_mode(j.at("map_mode").get<std::string>());
        config.output_dir = j.at("output_dir").get<std::string>();
        if (config.output_dir.empty())
            throw ValidationError(where + ": output_dir must be nonempty");
        if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
        return config;
    } catch (const json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
}

DriftConfig load_drift_config(const std::filesystem::path& path) {
    const std::string text = read_file(path, "simulation config");
    const std::string where = "simulation config " + path.string();
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw ValidationError(where + ": top level must be a JSON object");
        reject_unknown_keys(j,
                            {"num_entities", "num_perspectives", "num_days", "dim", "seed",
                             "perspective_scale", "drift_step_scale", "damage_scale",
                             "observation_noise", "variants"},
                            where.c_str());

        DriftConfig config;
        if (j.contains("num_entities")) config.num_entities = j.at("num_entities").get<int>();
        if (j.contains("num_perspectives"))
            config.num_perspectives = j.at("num_perspectives").get<int>();
        if (j.contains("num_days")) config.num_days = j.at("num_days").get<int>();
        if (j.contains("dim")) config.dim = j.at("dim").get<int>();
        if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("perspective_scale"))
            config.perspective_scale = j.at("perspective_scale").get<double>();
        if (j.contains("drift_step_scale"))
            config.drift_step_scale = j.at("drift_step_scale").get<double>();
        if (j.contains("damage_scale")) config.damage_scale = j.at("damage_scale").get<double>();
        if (j.contains("observation_noise"))
            config.observation_noise = j.at("observation_noise").get<double>();
        if (j.contains("variants")) {
            config.variants.clear();
            for (const json& v : j.at("variants")) {
                reject_unknown_keys(v, {"name", "extra_noise"}, "variant");
                DriftVariant variant;
                variant.name = v.at("name").get<std::string>();
                if (v.contains("extra_noise"))
                    variant.extra_noise = v.at("extra_noise").get<double>();
                config.variants.push_back(std::move(variant));
            }
        }
        return config;
    } catch (const json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
}

ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& variant,
                                const Manifest& manifest, const EmbeddingMatrix& embeddings,
                                bool timings) {
    if (config.experiment_name.empty()) throw ContractError("experiment_name must be nonempty");
    const std::vector<int> ranks = normalize_ranks(config.ranks);

    ExperimentReport report;
    report.experiment_name = config.experiment_name;
    report.variant = variant;
    report.policy_text = describe(config.policy);
    report.metric_text = to_string(config.metric);
    report.map_mode_text = to_string(config.map_mode);
    report.seed = config.seed;
    report.ranks = ranks;
    report.timings_enabled = timings;

    const std::vector<ExperimentStep> steps = plan_schedule(config.policy, manifest.schedule);
    for (const ExperimentStep& step : steps) {
        const auto started = std::chrono::steady_clock::now();
        const std::vector<ImageRecord> queries = select_day(manifest.records, step.query_day);
        if (queries.empty()) {
            report.warnings.push_back("query day " + std::to_string(step.query_day) +
                                      " has no images; step skipped");
            continue;
        }

        const GalleryState gallery = build_gallery(manifest.records, embeddings, step);
        std::vector<std::uint64_t> gallery_rows;
        gallery_rows.reserve(gallery.rows.size());
        std::unordered_map<std::uint64_t, int> entity_of;
        entity_of.reserve(gallery.rows.size());
        for (const GalleryRow& row : gallery.rows) {
            gallery_rows.push_back(row.row_index);
            entity_of.emplace(row.row_index, row.entity_id);
        }

        std::vector<QueryVector> query_vectors;
        query_vectors.reserve(queries.size());
        for (const ImageRecord& rec : queries) {
            check_query_binding(rec, embeddings);
            query_vectors.push_back({rec.image_id, embeddings.row(rec.row_index)});
        }

        const std::vector<RankedResult> results =
            batch_search(embeddings, gallery_rows, query_vectors, gallery_rows.size(),
                         config.metric);

        std::vector<QueryJudgment> judgments;
        judgments.reserve(queries.size());
        for (std::size_t i = 0; i < queries.size(); ++i) {
            QueryJudgment judgment;
            judgment.query_id = queries[i].image_id;
            judgment.query_entity = queries[i].entity_id;
            judgment.ranked_entities.reserve(results[i].entries.size());
            for (const RankedEntry& entry : results[i].entries)
                judgment.ranked_entities.push_back(entity_of.at(entry.row_index));
            judgments.push_back(std::move(judgment));
        }

        const MapResult map_result = mean_average_precision(judgments, config.map_mode);

        MetricRow row;
        row.query_day = step.query_day;
        row.day_label = manifest.schedule.day(step.query_day).day_label;
        row.map = map_result.value;
        row.rank_acc = cmc(judgments, ranks);
        row.excluded = map_result.excluded;

        StepLog log;
        log.query_day = step.query_day;
        log.day_label = row.day_label;
        log.gallery_days = gallery.enrolled_days;
        log.gallery_size = gallery.rows.size();
        log.query_count = queries.size();
        for (const ImageRecord& rec : queries) log.query_ids.push_back(rec.image_id);
        for (const GalleryRow& grow : gallery.rows) log.gallery_ids.push_back(grow.image_id);
        log.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                started)
                          .count();

        report.rows.push_back(std::move(row));
        report.steps.push_back(std::move(log));
    }

    if (report.rows.empty())
        throw EvaluationError("no query days produced metrics for experiment '" +
                              config.experiment_name + "'");

    std::vector<double> map_column;
    map_column.reserve(report.rows.size());
    std::map<int, std::vector<double>> rank_columns;
    for (const MetricRow& row : report.rows) {
        map_column.push_back(row.map);
        for (const auto& [k, value] : row.rank_acc) rank_columns[k].push_back(value);
    }
    report.summary.map = summarize(map_column);
    for (const auto& [k, column] : rank_columns) report.summary.rank_acc[k] = summarize(column);
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& variant,
                                bool timings) {
    const auto it = config.embeddings.find(variant);
    if (it == config.embeddings.end())
        throw ValidationError("variant '" + variant + "' is not present in the config embeddings");
    const Manifest manifest = load_manifest(config.manifest_path);
    const EmbeddingMatrix embeddings = load_embeddings(it->second);
    return run_experiment(config, variant, manifest, embeddings, timings);
}

ComparisonReport compare_runs(std::span<const ExperimentReport> reports) {
    if (reports.size() < 2)
        throw ContractError("compare_runs needs at least 2 reports, got " +
                            std::to_string(reports.size()));
    const std::vector<int>& ranks = reports.front().ranks;
    for (const ExperimentReport& report : reports)
        if (report.ranks != ranks)
            throw ContractError("mismatched rank sets: report '" + report.experiment_name + "/" +
                                report.variant + "' does not share the first report's ranks");

    ComparisonReport out;
    out.ranks = ranks;
    for (const ExperimentReport& report : reports) {
        ComparisonCell cell;
        cell.experiment = report.experiment_name;
        cell.variant = report.variant;
        cell.mean_map = report.summary.map.mean;
        for (const auto& [k, stats] : report.summary.rank_acc) cell.mean_rank[k] = stats.mean;
        out.cells.push_back(std::move(cell));
    }
    for (std::size_t a = 0; a < out.cells.size(); ++a) {
        for (std::size_t b = a + 1; b < out.cells.size(); ++b) {
            ComparisonDelta delta;
            delta.a = a;
            delta.b = b;
            delta.map_delta = out.cells[a].mean_map - out.cells[b].mean_map;
            for (const int k : ranks)
                delta.rank_delta[k] = out.cells[a].mean_rank.at(k) - out.cells[b].mean_rank.at(k);
            out.deltas.push_back(std::move(delta));
        }
    }
    return out;
}

}  // namespace reidbench
