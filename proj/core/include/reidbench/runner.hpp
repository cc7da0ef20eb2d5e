#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reidbench/driftsim.hpp"
#include "reidbench/embedstore.hpp"
#include "reidbench/gallery.hpp"
#include "reidbench/manifest.hpp"
#include "reidbench/metrics.hpp"
#include "reidbench/report.hpp"

namespace reidbench {

struct ExperimentConfig {
    std::string experiment_name;
    std::filesystem::path manifest_path;
    std::map<std::string, std::filesystem::path> embeddings;  // variant -> PBEB path
    GalleryPolicy policy;
    DistanceMetric metric = DistanceMetric::CosineDistance;
    std::vector<int> ranks = {1, 3, 5, 10};
    MapMode map_mode = MapMode::MicroPerQuery;
    std::filesystem::path output_dir;
    std::optional<std::uint64_t> seed;  // annotation echoed into report headers
};

// JSON config loaders. Relative paths inside a config resolve against the
// process working directory; unknown keys are rejected.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
DriftConfig load_drift_config(const std::filesystem::path& path);

// Steps the policy through the schedule, ranking every query-day image
// against the step's gallery (full ranking) and scoring mAP/Rank-k per day.
// Days with zero query images are skipped with a warning in the report.
ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& variant,
                                const Manifest& manifest, const EmbeddingMatrix& embeddings,
                                bool timings = false);

// Convenience overload loading the manifest and the variant's embeddings
// from the paths named in the config.
ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& variant,
                                bool timings = false);

// Summary-mean grid plus all pairwise deltas, computed from unrounded
// values; requires every report to share one rank set.
ComparisonReport compare_runs(std::span<const ExperimentReport> reports);

}  // namespace reidbench
