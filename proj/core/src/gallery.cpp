#include "reidbench/gallery.hpp"

#include <algorithm>

#include "reidbench/error.hpp"

namespace reidbench {

namespace {

GalleryRow bind_record(const ImageRecord& rec, const EmbeddingMatrix& embeddings) {
    if (rec.row_index >= embeddings.count())
        throw BindingError("no embedding row for image '" + rec.image_id + "': row " +
                           std::to_string(rec.row_index) + " out of range (count " +
                           std::to_string(embeddings.count()) + ")");
    const std::string& stored_id = embeddings.row_ids[rec.row_index];
    if (!stored_id.empty() && stored_id != rec.image_id)
        throw BindingError("embedding row " + std::to_string(rec.row_index) + " is named '" +
                           stored_id + "' but the manifest binds it to '" + rec.image_id + "'");
    return {rec.image_id, rec.row_index, rec.entity_id, rec.day_index};
}

std::vector<int> sorted_unique(std::vector<int> days) {
    std::sort(days.begin(), days.end());
    days.erase(std::unique(days.begin(), days.end()), days.end());
    return days;
}

}  // namespace

std::string describe(const GalleryPolicy& policy) {
    return std::visit(
        [](const auto& p) -> std::string {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, FixedPolicy>) {
                std::string out = "fixed(days=";
                for (std::size_t i = 0; i < p.days.size(); ++i) {
                    if (i > 0) out += ',';
                    out += std::to_string(p.days[i]);
                }
                return out + ")";
            } else if constexpr (std::is_same_v<P, CumulativePolicy>) {
                return "cumulative(start_day=" + std::to_string(p.start_day) + ")";
            } else {
                return "rolling(window=" + std::to_string(p.window) + ")";
            }
        },
        policy);
}

std::vector<ExperimentStep> plan_schedule(const GalleryPolicy& policy,
                                          const RecordingSchedule& schedule) {
    const int num_days = schedule.num_days();
    if (num_days < 2)
        throw ContractError("schedule must have at least 2 days, got " + std::to_string(num_days));

    std::vector<ExperimentStep> steps;

    if (const auto* fixed = std::get_if<FixedPolicy>(&policy)) {
        if (fixed->days.empty()) throw ContractError("fixed policy requires a nonempty day set");
        const std::vector<int> days = sorted_unique(fixed->days);
        if (days.front() < 1 || days.back() > num_days)
            throw ContractError("fixed policy day out of schedule range 1.." +
                                std::to_string(num_days));
        if (days.back() >= num_days)
            throw ContractError("fixed policy day " + std::to_string(days.back()) +
                                " leaves no query days after it");
        for (int q = days.back() + 1; q <= num_days; ++q) steps.push_back({days, q});
        return steps;
    }

    if (const auto* cumulative = std::get_if<CumulativePolicy>(&policy)) {
        const int start = cumulative->start_day;
        if (start < 1 || start >= num_days)
            throw ContractError("cumulative start_day " + std::to_string(start) +
                                " must lie in 1.." + std::to_string(num_days - 1));
        for (int q = start + 1; q <= num_days; ++q) {
            ExperimentStep step;
            for (int d = start; d < q; ++d) step.gallery_days.push_back(d);
            step.query_day = q;
            steps.push_back(std::move(step));
        }
        return steps;
    }

    const auto& rolling = std::get<RollingPolicy>(policy);
    if (rolling.window < 1)
        throw ContractError("rolling window must be >= 1, got " + std::to_string(rolling.window));
    for (int q = 2; q <= num_days; ++q) {
        ExperimentStep step;
        for (int d = std::max(1, q - rolling.window); d < q; ++d) step.gallery_days.push_back(d);
        step.query_day = q;
        steps.push_back(std::move(step));
    }
    return steps;
}

GalleryState build_gallery(std::span<const ImageRecord> records, const EmbeddingMatrix& embeddings,
                           const ExperimentStep& step) {
    if (step.gallery_days.empty()) throw ContractError("gallery_days is empty");
    const std::vector<int> days = sorted_unique(step.gallery_days);
    if (std::binary_search(days.begin(), days.end(), step.query_day))
        throw ContractError("query day " + std::to_string(step.query_day) +
                            " must not be enrolled in its own gallery");

    GalleryState state;
    state.enrolled_days = days;
    for (const int day : days) {
        const std::size_t before = state.rows.size();
        for (const ImageRecord& rec : records)
            if (rec.day_index == day) state.rows.push_back(bind_record(rec, embeddings));
        if (state.rows.size() == before)
            throw ContractError("gallery day " + std::to_string(day) + " has no records");
    }
    return state;
}

GalleryState advance(const GalleryState& state, const GalleryPolicy& policy,
                     std::span<const ImageRecord> new_day_records,
                     const EmbeddingMatrix& embeddings) {
    if (new_day_records.empty()) throw ContractError("advance requires a nonempty new day");
    const int new_day = new_day_records.front().day_index;
    for (const ImageRecord& rec : new_day_records)
        if (rec.day_index != new_day)
            throw ContractError("advance records span multiple days (" + std::to_string(new_day) +
                                " and " + std::to_string(rec.day_index) + ")");
    if (!state.enrolled_days.empty() && new_day <= state.enrolled_days.back())
        throw ContractError("out-of-order day " + std::to_string(new_day) +
                            ": gallery already holds day " +
                            std::to_string(state.enrolled_days.back()));

    if (std::holds_alternative<FixedPolicy>(policy)) return state;

    GalleryState next;
    int keep_after = 0;  // retain enrolled days strictly greater than this
    if (const auto* rolling = std::get_if<RollingPolicy>(&policy))
        keep_after = new_day - rolling->window;

    for (const int day : state.enrolled_days)
        if (day > keep_after) next.enrolled_days.push_back(day);
    for (const GalleryRow& row : state.rows)
        if (row.day_index > keep_after) next.rows.push_back(row);

    next.enrolled_days.push_back(new_day);
    for (const ImageRecord& rec : new_day_records)
        next.rows.push_back(bind_record(rec, embeddings));
    return next;
}

}  // namespace reidbench
