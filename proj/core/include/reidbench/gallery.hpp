#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "reidbench/embedstore.hpp"
#include "reidbench/manifest.hpp"

namespace reidbench {

// The three gallery-update families: a frozen day set, everything since a
// start day, or a sliding window of the most recent days.
struct FixedPolicy {
    std::vector<int> days;  // nonempty; deduplicated and sorted by plan_schedule
};

struct CumulativePolicy {
    int start_day = 1;
};

struct RollingPolicy {
    int window = 1;
};

using GalleryPolicy = std::variant<FixedPolicy, CumulativePolicy, RollingPolicy>;

// Stable one-line form for report headers, e.g. "rolling(window=1)".
std::string describe(const GalleryPolicy& policy);

struct ExperimentStep {
    std::vector<int> gallery_days;  // ascending, never contains query_day
    int query_day = 0;

    friend bool operator==(const ExperimentStep&, const ExperimentStep&) = default;
};

// Expands a policy over the schedule into (gallery days, query day) steps.
// Fixed(D): queries max(D)+1..last. Cumulative(s): queries s+1..last with
// gallery {s..q-1}. Rolling(w): queries 2..last with gallery {max(1,q-w)..q-1}.
std::vector<ExperimentStep> plan_schedule(const GalleryPolicy& policy,
                                          const RecordingSchedule& schedule);

struct GalleryRow {
    std::string image_id;
    std::uint64_t row_index = 0;
    int entity_id = 0;
    int day_index = 0;

    friend bool operator==(const GalleryRow&, const GalleryRow&) = default;
};

// Immutable snapshot of the enrolled set; advance returns a new state.
struct GalleryState {
    std::vector<int> enrolled_days;  // ascending
    std::vector<GalleryRow> rows;    // ordered by (day_index, manifest order)

    friend bool operator==(const GalleryState&, const GalleryState&) = default;
};

// Enrolls every record of the step's gallery days, binding each to its
// embedding row. Named rows must match the record's image_id.
GalleryState build_gallery(std::span<const ImageRecord> records, const EmbeddingMatrix& embeddings,
                           const ExperimentStep& step);

// Applies one new recording day: Fixed ignores it, Cumulative keeps
// everything, Rolling evicts days older than its window. The records must
// all belong to one day newer than every enrolled day.
GalleryState advance(const GalleryState& state, const GalleryPolicy& policy,
                     std::span<const ImageRecord> new_day_records,
                     const EmbeddingMatrix& embeddings);

}  // namespace reidbench
