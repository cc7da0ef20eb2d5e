#include "reidbench/report.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "reidbench/error.hpp"
#include "reidbench/io.hpp"

namespace reidbench {

namespace {

std::string header_comment(const ExperimentReport& report) {
    std::string out;
    out += "# reidbench report v1\n";
    out += "# experiment: " + report.experiment_name + "\n";
    out += "# variant: " + report.variant + "\n";
    out += "# policy: " + report.policy_text + "\n";
    out += "# metric: " + report.metric_text + "\n";
    out += "# map_mode: " + report.map_mode_text + "\n";
    if (report.seed) out += "# seed: " + std::to_string(*report.seed) + "\n";
    return out;
}

std::string csv_row(const std::string& label, double map_value,
                    const std::map<int, double>& ranks) {
    std::string out = label + "," + format2(map_value);
    for (const auto& [k, value] : ranks) out += "," + format2(value);
    return out + "\n";
}

std::string md_row(const std::string& label, double map_value,
                   const std::map<int, double>& ranks) {
    std::string out = "| " + label + " | " + format2(map_value);
    for (const auto& [k, value] : ranks) out += " | " + format2(value);
    return out + " |\n";
}

// Pulls one named statistic out of a summary, per column.
template <typename Pick>
std::map<int, double> pick_ranks(const ReportSummary& summary, Pick pick) {
    std::map<int, double> out;
    for (const auto& [k, stats] : summary.rank_acc) out[k] = pick(stats);
    return out;
}

nlohmann::ordered_json stats_json(const SummaryStats& stats) {
    nlohmann::ordered_json j;
    j["max"] = stats.max;
    j["min"] = stats.min;
    j["mean"] = stats.mean;
    j["std"] = stats.stddev;
    return j;
}

SummaryStats stats_from_json(const nlohmann::json& j) {
    SummaryStats stats;
    stats.max = j.at("max").get<double>();
    stats.min = j.at("min").get<double>();
    stats.mean = j.at("mean").get<double>();
    stats.stddev = j.at("std").get<double>();
    return stats;
}

double parse_double_field(std::string_view field, std::size_t line_no) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("report line " + std::to_string(line_no) + ": bad numeric field '" +
                         std::string(field) + "'");
    return value;
}

int parse_int_key(const std::string& key, const char* what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), value);
    if (ec != std::errc() || ptr != key.data() + key.size())
        throw ParseError(std::string("bad ") + what + " key '" + key + "'");
    return value;
}

std::vector<std::string_view> split_on(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

std::string format2(double value) {
    // llrint under the default FE_TONEAREST mode rounds half to even.
    const long long scaled = std::llrint(value * 100.0);
    const bool negative = scaled < 0;
    const unsigned long long magnitude =
        negative ? -static_cast<unsigned long long>(scaled) : static_cast<unsigned long long>(scaled);
    std::string out = negative ? "-" : "";
    out += std::to_string(magnitude / 100);
    out += '.';
    out += static_cast<char>('0' + (magnitude % 100) / 10);
    out += static_cast<char>('0' + magnitude % 10);
    return out;
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
    if (format == ReportFormat::CSV) {
        std::string out = header_comment(report);
        out += "query_day,map";
        for (const int k : report.ranks) out += ",rank" + std::to_string(k);
        out += "\n";
        for (const MetricRow& row : report.rows) out += csv_row(row.day_label, row.map, row.rank_acc);
        const ReportSummary& s = report.summary;
        out += csv_row("max", s.map.max, pick_ranks(s, [](const SummaryStats& v) { return v.max; }));
        out += csv_row("min", s.map.min, pick_ranks(s, [](const SummaryStats& v) { return v.min; }));
        out += csv_row("mean", s.map.mean,
                       pick_ranks(s, [](const SummaryStats& v) { return v.mean; }));
        out += csv_row("std", s.map.stddev,
                       pick_ranks(s, [](const SummaryStats& v) { return v.stddev; }));
        return out;
    }

    std::string out = "# " + report.experiment_name + " / " + report.variant + "\n\n";
    out += "- format: reidbench report v1\n";
    out += "- policy: " + report.policy_text + "\n";
    out += "- metric: " + report.metric_text + "\n";
    out += "- map_mode: " + report.map_mode_text + "\n";
    if (report.seed) out += "- seed: " + std::to_string(*report.seed) + "\n";
    out += "\n| Query Set | mAP";
    for (const int k : report.ranks) out += " | Rank-" + std::to_string(k);
    out += " |\n| ---";
    for (std::size_t i = 0; i <= report.ranks.size(); ++i) out += " | ---";
    out += " |\n";
    for (const MetricRow& row : report.rows) out += md_row(row.day_label, row.map, row.rank_acc);
    const ReportSummary& s = report.summary;
    out += md_row("max", s.map.max, pick_ranks(s, [](const SummaryStats& v) { return v.max; }));
    out += md_row("min", s.map.min, pick_ranks(s, [](const SummaryStats& v) { return v.min; }));
    out += md_row("mean", s.map.mean, pick_ranks(s, [](const SummaryStats& v) { return v.mean; }));
    out += md_row("std", s.map.stddev,
                  pick_ranks(s, [](const SummaryStats& v) { return v.stddev; }));
    return out;
}

std::string emit_sidecar(const ExperimentReport& report) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["experiment"] = report.experiment_name;
    j["variant"] = report.variant;
    j["policy"] = report.policy_text;
    j["metric"] = report.metric_text;
    j["map_mode"] = report.map_mode_text;
    if (report.seed) j["seed"] = *report.seed;
    j["ranks"] = report.ranks;

    j["rows"] = nlohmann::ordered_json::array();
    for (const MetricRow& row : report.rows) {
        nlohmann::ordered_json r;
        r["query_day"] = row.query_day;
        r["day_label"] = row.day_label;
        r["map"] = row.map;
        nlohmann::ordered_json acc;
        for (const auto& [k, value] : row.rank_acc) acc[std::to_string(k)] = value;
        r["rank_acc"] = std::move(acc);
        r["excluded"] = row.excluded;
        j["rows"].push_back(std::move(r));
    }

    nlohmann::ordered_json summary;
    summary["map"] = stats_json(report.summary.map);
    nlohmann::ordered_json rank_summary;
    for (const auto& [k, stats] : report.summary.rank_acc)
        rank_summary[std::to_string(k)] = stats_json(stats);
    summary["rank_acc"] = std::move(rank_summary);
    j["summary"] = std::move(summary);

    j["steps"] = nlohmann::ordered_json::array();
    for (const StepLog& step : report.steps) {
        nlohmann::ordered_json s;
        s["query_day"] = step.query_day;
        s["day_label"] = step.day_label;
        s["gallery_days"] = step.gallery_days;
        s["gallery_size"] = step.gallery_size;
        s["query_count"] = step.query_count;
        if (report.timings_enabled) s["wall_ms"] = step.wall_ms;
        s["query_ids"] = step.query_ids;
        s["gallery_ids"] = step.gallery_ids;
        j["steps"].push_back(std::move(s));
    }
    return j.dump(2) + "\n";
}

ExperimentReport load_report_sidecar(const std::filesystem::path& path) {
    const std::string text = read_file(path, "report sidecar");
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        if (j.at("format_version").get<int>() != 1)
            throw FormatError("report sidecar " + path.string() + ": unsupported format version");

        ExperimentReport report;
        report.experiment_name = j.at("experiment").get<std::string>();
        report.variant = j.at("variant").get<std::string>();
        report.policy_text = j.at("policy").get<std::string>();
        report.metric_text = j.at("metric").get<std::string>();
        report.map_mode_text = j.at("map_mode").get<std::string>();
        if (j.contains("seed")) report.seed = j.at("seed").get<std::uint64_t>();
        report.ranks = j.at("ranks").get<std::vector<int>>();

        for (const nlohmann::json& r : j.at("rows")) {
            MetricRow row;
            row.query_day = r.at("query_day").get<int>();
            row.day_label = r.at("day_label").get<std::string>();
            row.map = r.at("map").get<double>();
            for (const auto& [key, value] : r.at("rank_acc").items())
                row.rank_acc[parse_int_key(key, "rank_acc")] = value.get<double>();
            row.excluded = r.at("excluded").get<std::size_t>();
            report.rows.push_back(std::move(row));
        }

        report.summary.map = stats_from_json(j.at("summary").at("map"));
        for (const auto& [key, value] : j.at("summary").at("rank_acc").items())
            report.summary.rank_acc[parse_int_key(key, "rank_acc")] = stats_from_json(value);

        for (const nlohmann::json& s : j.at("steps")) {
            StepLog step;
            step.query_day = s.at("query_day").get<int>();
            step.day_label = s.at("day_label").get<std::string>();
            step.gallery_days = s.at("gallery_days").get<std::vector<int>>();
            step.gallery_size = s.at("gallery_size").get<std::size_t>();
            step.query_count = s.at("query_count").get<std::size_t>();
            if (s.contains("wall_ms")) {
                step.wall_ms = s.at("wall_ms").get<double>();
                report.timings_enabled = true;
            }
            step.query_ids = s.at("query_ids").get<std::vector<std::string>>();
            step.gallery_ids = s.at("gallery_ids").get<std::vector<std::string>>();
            report.steps.push_back(std::move(step));
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("report sidecar " + path.string() + ": " + e.what());
    }
}

ExperimentReport load_report_csv(const std::filesystem::path& path) {
    const std::string text = read_file(path, "report file");
    ExperimentReport report;
    bool header_seen = false;
    std::size_t line_no = 0;

    std::vector<double> map_column;
    std::map<int, std::vector<double>> rank_columns;

    for (std::string_view line : split_on(text, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        if (line.starts_with("#")) {
            const auto capture = [&](std::string_view prefix, std::string& into) {
                if (line.starts_with(prefix)) into = std::string(line.substr(prefix.size()));
            };
            capture("# experiment: ", report.experiment_name);
            capture("# variant: ", report.variant);
            capture("# policy: ", report.policy_text);
            capture("# metric: ", report.metric_text);
            capture("# map_mode: ", report.map_mode_text);
            if (line.starts_with("# seed: ")) {
                const std::string_view digits = line.substr(8);
                std::uint64_t seed = 0;
                const auto [ptr, ec] =
                    std::from_chars(digits.data(), digits.data() + digits.size(), seed);
                if (ec != std::errc() || ptr != digits.data() + digits.size())
                    throw ParseError("report line " + std::to_string(line_no) + ": bad seed value");
                report.seed = seed;
            }
            continue;
        }

        const std::vector<std::string_view> fields = split_on(line, ',');
        if (!header_seen) {
            if (fields.size() < 2 || fields[0] != "query_day" || fields[1] != "map")
                throw ParseError("report line " + std::to_string(line_no) +
                                 ": expected header 'query_day,map,rank...'");
            for (std::size_t i = 2; i < fields.size(); ++i) {
                if (!fields[i].starts_with("rank"))
                    throw ParseError("report line " + std::to_string(line_no) +
                                     ": unexpected column '" + std::string(fields[i]) + "'");
                int k = 0;
                const std::string_view digits = fields[i].substr(4);
                const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
                if (ec != std::errc() || ptr != digits.data() + digits.size())
                    throw ParseError("report line " + std::to_string(line_no) +
                                     ": bad rank column '" + std::string(fields[i]) + "'");
                report.ranks.push_back(k);
            }
            header_seen = true;
            continue;
        }

        if (fields.size() != report.ranks.size() + 2)
            throw ParseError("report line " + std::to_string(line_no) + ": expected " +
                             std::to_string(report.ranks.size() + 2) + " fields");
        const std::string_view label = fields[0];
        if (label == "max" || label == "min" || label == "mean" || label == "std")
            continue;  // summary rows are recomputed below

        MetricRow row;
        row.day_label = std::string(label);
        row.map = parse_double_field(fields[1], line_no);
        for (std::size_t i = 0; i < report.ranks.size(); ++i)
            row.rank_acc[report.ranks[i]] = parse_double_field(fields[i + 2], line_no);
        map_column.push_back(row.map);
        for (const auto& [k, value] : row.rank_acc) rank_columns[k].push_back(value);
        report.rows.push_back(std::move(row));
    }

    if (!header_seen) throw ParseError("report file " + path.string() + ": no header row");
    if (report.rows.empty()) throw DataError("report file " + path.string() + ": no data rows");
    report.summary.map = summarize(map_column);
    for (const auto& [k, column] : rank_columns) report.summary.rank_acc[k] = summarize(column);
    return report;
}

std::string emit_comparison(const ComparisonReport& report) {
    std::string out = "# reidbench comparison v1\n# ranks: ";
    for (std::size_t i = 0; i < report.ranks.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(report.ranks[i]);
    }
    out += "\nexperiment,variant,mean_map";
    for (const int k : report.ranks) out += ",mean_rank" + std::to_string(k);
    out += "\n";
    for (const ComparisonCell& cell : report.cells) {
        out += cell.experiment + "," + cell.variant + "," + format2(cell.mean_map);
        for (const auto& [k, value] : cell.mean_rank) out += "," + format2(value);
        out += "\n";
    }
    for (const ComparisonDelta& delta : report.deltas) {
        const ComparisonCell& a = report.cells[delta.a];
        const ComparisonCell& b = report.cells[delta.b];
        out += "delta," + a.experiment + "/" + a.variant + "-" + b.experiment + "/" + b.variant +
               "," + format2(delta.map_delta);
        for (const auto& [k, value] : delta.rank_delta) out += "," + format2(value);
        out += "\n";
    }
    return out;
}

}  // namespace reidbench
