#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace reidbench {

enum class Perspective { Left, Center, Right };

const char* to_string(Perspective p);
Perspective parse_perspective(const std::string& token);

// One labeled image. `row_index` binds the record to a row of the
// companion embedding file; `source_path` may be empty.
struct ImageRecord {
    std::string image_id;
    int entity_id = 0;
    Perspective perspective = Perspective::Center;
    int day_index = 1;  // 1-based position in the recording schedule
    std::string day_label;
    bool damaged = false;
    std::uint64_t row_index = 0;
    std::string source_path;

    friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct ScheduleDay {
    std::string day_label;
    bool damage_day = false;

    friend bool operator==(const ScheduleDay&, const ScheduleDay&) = default;
};

// Ordered recording days; day_index = position + 1.
struct RecordingSchedule {
    std::vector<ScheduleDay> days;

    int num_days() const { return static_cast<int>(days.size()); }
    const ScheduleDay& day(int day_index) const { return days.at(static_cast<std::size_t>(day_index - 1)); }

    friend bool operator==(const RecordingSchedule&, const RecordingSchedule&) = default;
};

struct DatasetShape {
    int num_entities = 0;
    int perspectives_per_entity = 0;
    std::size_t expected_total = 0;
};

struct Manifest {
    std::vector<ImageRecord> records;
    RecordingSchedule schedule;
};

// CSV grammar: UTF-8, LF line endings, no quoting (fields must not contain
// commas). Header is
//   image_id,entity_id,perspective,day_label,damaged,row_index,source_path
// with the trailing source_path column optional on input. The schedule is
// derived from day_label first-appearance order; a day is a damage day when
// any of its records is flagged damaged.
Manifest parse_manifest(const std::string& text);
Manifest load_manifest(const std::filesystem::path& path);
std::string emit_manifest(std::span<const ImageRecord> records);

struct MissingPair {
    int entity_id = 0;
    Perspective perspective = Perspective::Center;

    friend bool operator==(const MissingPair&, const MissingPair&) = default;
};

struct DayCoverage {
    int day_index = 0;
    std::string day_label;
    std::size_t record_count = 0;
    std::size_t distinct_entities = 0;
    std::vector<MissingPair> missing;  // against the shape's full cross product
};

// Advisory only: completeness is reported, never enforced.
struct ValidationReport {
    std::vector<DayCoverage> days;
    std::size_t total_records = 0;
    std::size_t expected_total = 0;
    bool total_matches = false;
    std::size_t missing_total = 0;
};

ValidationReport validate_dataset(std::span<const ImageRecord> records, const DatasetShape& shape);
std::string to_text(const ValidationReport& report);

std::vector<ImageRecord> select_day(std::span<const ImageRecord> records, int day_index);

}  // namespace reidbench
