#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reidbench/metrics.hpp"

namespace reidbench {

enum class ReportFormat { CSV, Markdown };

// Execution trace of one experiment step; the id lists make the
// no-leakage property auditable from the emitted sidecar alone.
struct StepLog {
    int query_day = 0;
    std::string day_label;
    std::vector<int> gallery_days;
    std::size_t gallery_size = 0;
    std::size_t query_count = 0;
    double wall_ms = 0.0;  // emitted only when timings are enabled
    std::vector<std::string> query_ids;
    std::vector<std::string> gallery_ids;
};

struct ReportSummary {
    SummaryStats map;
    std::map<int, SummaryStats> rank_acc;
};

struct ExperimentReport {
    std::string experiment_name;
    std::string variant;
    std::string policy_text;
    std::string metric_text;
    std::string map_mode_text;
    std::optional<std::uint64_t> seed;  // annotation from the config, if any
    std::vector<int> ranks;
    std::vector<MetricRow> rows;  // ordered by query_day
    ReportSummary summary;
    std::vector<StepLog> steps;
    std::vector<std::string> warnings;  // diagnostics only, never emitted
    bool timings_enabled = false;
};

// Fixed 2-decimal formatting, round-half-even: 0.125 -> "0.12".
std::string format2(double value);

// Rounded table (CSV or Markdown): one row per query day, then
// max/min/mean/std rows; a header comment records metric, map_mode,
// policy, seed, and format version.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

// Full-precision JSON twin of the rounded tables plus per-step logs.
std::string emit_sidecar(const ExperimentReport& report);
ExperimentReport load_report_sidecar(const std::filesystem::path& path);

// Fallback reader for the rounded CSV form; summary is recomputed from the
// parsed (rounded) row values and step logs are unavailable.
ExperimentReport load_report_csv(const std::filesystem::path& path);

struct ComparisonCell {
    std::string experiment;
    std::string variant;
    double mean_map = 0.0;
    std::map<int, double> mean_rank;
};

// Values are cells[a] minus cells[b], from unrounded summary means.
struct ComparisonDelta {
    std::size_t a = 0;
    std::size_t b = 0;
    double map_delta = 0.0;
    std::map<int, double> rank_delta;
};

struct ComparisonReport {
    std::vector<int> ranks;
    std::vector<ComparisonCell> cells;
    std::vector<ComparisonDelta> deltas;
};

std::string emit_comparison(const ComparisonReport& report);

}  // namespace reidbench
