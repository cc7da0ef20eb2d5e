#include "reidbench/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "reidbench/error.hpp"

namespace reidbench {

namespace {

constexpr std::string_view kHeaderFull =
    "image_id,entity_id,perspective,day_label,damaged,row_index,source_path";
constexpr std::string_view kHeaderShort =
    "image_id,entity_id,perspective,day_label,damaged,row_index";

[[noreturn]] void fail_row(std::size_t line_no, const std::string& what) {
    throw ParseError("manifest line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

int parse_int_field(std::string_view field, std::size_t line_no, const char* name) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || value < 0)
        fail_row(line_no,
                 std::string(name) + " is not a non-negative integer: '" + std::string(field) + "'");
    return value;
}

std::uint64_t parse_u64_field(std::string_view field, std::size_t line_no, const char* name) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        fail_row(line_no,
                 std::string(name) + " is not a non-negative integer: '" + std::string(field) + "'");
    return value;
}

bool parse_bool_field(std::string_view field, std::size_t line_no) {
    if (field == "true") return true;
    if (field == "false") return false;
    fail_row(line_no, "damaged must be 'true' or 'false', got '" + std::string(field) + "'");
}

void check_field_text(const std::string& value, const char* name, const std::string& image_id) {
    if (value.find_first_of(",\n\r") != std::string::npos)
        throw ValidationError("record '" + image_id + "': " + name +
                              " contains a comma or line break and cannot be emitted");
}

}  // namespace

const char* to_string(Perspective p) {
    switch (p) {
        case Perspective::Left: return "Left";
        case Perspective::Center: return "Center";
        case Perspective::Right: return "Right";
    }
    throw ContractError("invalid perspective enum value");
}

Perspective parse_perspective(const std::string& token) {
    if (token == "Left") return Perspective::Left;
    if (token == "Center") return Perspective::Center;
    if (token == "Right") return Perspective::Right;
    throw ValidationError("unknown perspective token: '" + token + "'");
}

Manifest parse_manifest(const std::string& text) {
    const std::vector<std::string_view> lines = split_lines(text);
    if (lines.empty()) throw ParseError("manifest line 1: empty input, header expected");

    if (lines[0].find('\r') != std::string_view::npos)
        fail_row(1, "carriage return found; LF line endings required");
    std::size_t ncols = 0;
    if (lines[0] == kHeaderFull) ncols = 7;
    else if (lines[0] == kHeaderShort) ncols = 6;
    else fail_row(1, "bad header, expected '" + std::string(kHeaderFull) + "'");

    Manifest out;
    out.records.reserve(lines.size() - 1);
    std::unordered_set<std::string> seen_ids;
    std::unordered_map<std::string, int> day_index_of;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const std::string_view line = lines[i];
        if (line.find('\r') != std::string_view::npos)
            fail_row(line_no, "carriage return found; LF line endings required");
        const std::vector<std::string_view> fields = split_fields(line);
        if (fields.size() != ncols)
            fail_row(line_no, "expected " + std::to_string(ncols) + " fields, got " +
                                  std::to_string(fields.size()));

        ImageRecord rec;
        rec.image_id = std::string(fields[0]);
        if (rec.image_id.empty()) fail_row(line_no, "image_id is empty");
        rec.entity_id = parse_int_field(fields[1], line_no, "entity_id");
        try {
            rec.perspective = parse_perspective(std::string(fields[2]));
        } catch (const ValidationError& e) {
            throw ValidationError("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
        rec.day_label = std::string(fields[3]);
        if (rec.day_label.empty()) fail_row(line_no, "day_label is empty");
        rec.damaged = parse_bool_field(fields[4], line_no);
        rec.row_index = parse_u64_field(fields[5], line_no, "row_index");
        if (ncols == 7) rec.source_path = std::string(fields[6]);

        if (!seen_ids.insert(rec.image_id).second)
            throw ValidationError("manifest line " + std::to_string(line_no) +
                                  ": duplicate image_id '" + rec.image_id + "'");

        auto [it, inserted] =
            day_index_of.emplace(rec.day_label, static_cast<int>(out.schedule.days.size()) + 1);
        if (inserted) out.schedule.days.push_back({rec.day_label, false});
        rec.day_index = it->second;
        if (rec.damaged) out.schedule.days[static_cast<std::size_t>(rec.day_index - 1)].damage_day = true;

        out.records.push_back(std::move(rec));
    }
    return out;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open manifest file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw DataError("error while reading manifest file: " + path.string());
    return parse_manifest(text);
}

std::string emit_manifest(std::span<const ImageRecord> records) {
    std::string out(kHeaderFull);
    out += '\n';
    for (const ImageRecord& rec : records) {
        check_field_text(rec.image_id, "image_id", rec.image_id);
        check_field_text(rec.day_label, "day_label", rec.image_id);
        check_field_text(rec.source_path, "source_path", rec.image_id);
        if (rec.entity_id < 0)
            throw ValidationError("record '" + rec.image_id + "': entity_id is negative");
        out += rec.image_id;
        out += ',';
        out += std::to_string(rec.entity_id);
        out += ',';
        out += to_string(rec.perspective);
        out += ',';
        out += rec.day_label;
        out += ',';
        out += rec.damaged ? "true" : "false";
        out += ',';
        out += std::to_string(rec.row_index);
        out += ',';
        out += rec.source_path;
        out += '\n';
    }
    return out;
}

ValidationReport validate_dataset(std::span<const ImageRecord> records, const DatasetShape& shape) {
    ValidationReport report;
    report.total_records = records.size();
    report.expected_total = shape.expected_total;
    report.total_matches = (records.size() == shape.expected_total);

    std::map<int, std::vector<const ImageRecord*>> by_day;
    for (const ImageRecord& rec : records) by_day[rec.day_index].push_back(&rec);

    const int num_perspectives = std::min(shape.perspectives_per_entity, 3);
    constexpr Perspective kAll[] = {Perspective::Left, Perspective::Center, Perspective::Right};

    for (const auto& [day_index, day_records] : by_day) {
        DayCoverage cov;
        cov.day_index = day_index;
        cov.day_label = day_records.front()->day_label;
        cov.record_count = day_records.size();

        std::set<int> entities;
        std::set<std::pair<int, int>> present;
        for (const ImageRecord* rec : day_records) {
            entities.insert(rec->entity_id);
            present.emplace(rec->entity_id, static_cast<int>(rec->perspective));
        }
        cov.distinct_entities = entities.size();

        for (int entity = 0; entity < shape.num_entities; ++entity)
            for (int p = 0; p < num_perspectives; ++p)
                if (!present.count({entity, static_cast<int>(kAll[p])}))
                    cov.missing.push_back({entity, kAll[p]});

        report.missing_total += cov.missing.size();
        report.days.push_back(std::move(cov));
    }
    return report;
}

std::string to_text(const ValidationReport& report) {
    std::string out;
    out += "records " + std::to_string(report.total_records) + ", expected " +
           std::to_string(report.expected_total) +
           (report.total_matches ? " (match)" : " (MISMATCH)") + "\n";
    out += "missing pairs " + std::to_string(report.missing_total) + "\n";
    for (const DayCoverage& day : report.days) {
        out += "day " + std::to_string(day.day_index) + " [" + day.day_label + "]: records " +
               std::to_string(day.record_count) + ", entities " +
               std::to_string(day.distinct_entities) + ", missing " +
               std::to_string(day.missing.size()) + "\n";
        for (const MissingPair& pair : day.missing)
            out += "  missing entity " + std::to_string(pair.entity_id) + " " +
                   to_string(pair.perspective) + "\n";
    }
    return out;
}

std::vector<ImageRecord> select_day(std::span<const ImageRecord> records, int day_index) {
    std::vector<ImageRecord> out;
    for (const ImageRecord& rec : records)
        if (rec.day_index == day_index) out.push_back(rec);
    return out;
}

}  // namespace reidbench
