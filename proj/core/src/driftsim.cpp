#include "reidbench/driftsim.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "reidbench/cbrng.hpp"
#include "reidbench/error.hpp"

namespace reidbench {

namespace {

// Key-space roles; every draw is keyed (seed, role, indices..., coord).
constexpr std::uint64_t kRoleBase = 1;         // b_i
constexpr std::uint64_t kRolePerspective = 2;  // p_v
constexpr std::uint64_t kRoleWalk = 3;         // delta_{i,s}
constexpr std::uint64_t kRoleDamage = 4;       // u_i
constexpr std::uint64_t kRoleNoise = 5;        // eta_{i,v,t,m}

void validate(const DriftConfig& config) {
    if (config.num_entities < 1) throw ContractError("num_entities must be >= 1");
    if (config.num_perspectives < 1 || config.num_perspectives > 3)
        throw ContractError("num_perspectives must be in 1..3");
    if (config.num_days < 1) throw ContractError("num_days must be >= 1");
    if (config.dim < 2) throw ContractError("dim must be >= 2");
    const double scales[] = {config.perspective_scale, config.drift_step_scale,
                             config.damage_scale, config.observation_noise};
    for (const double s : scales)
        if (!std::isfinite(s) || s < 0.0)
            throw ContractError("drift scales must be finite and non-negative");
    if (config.variants.empty()) throw ContractError("at least one variant is required");
    std::set<std::string> names;
    for (const DriftVariant& variant : config.variants) {
        if (variant.name.empty()) throw ContractError("variant names must be nonempty");
        if (!names.insert(variant.name).second)
            throw ContractError("duplicate variant name '" + variant.name + "'");
        if (!std::isfinite(variant.extra_noise) || variant.extra_noise < 0.0)
            throw ContractError("variant extra_noise must be finite and non-negative");
    }
}

std::string pad_number(int value, std::size_t width) {
    std::string s = std::to_string(value);
    while (s.size() < width) s.insert(s.begin(), '0');
    return s;
}

// Days 1..N-1 get zero-padded numeric labels; the damage day reuses the
// previous label with an "a" suffix (e.g. 14 days + damage -> "01".."14","14a"
// is produced by N=15).
std::vector<std::string> day_labels(int num_days, int damage_day) {
    const int regular = (damage_day > 0) ? num_days - 1 : num_days;
    const std::size_t width = std::max<std::size_t>(2, std::to_string(regular).size());
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(num_days));
    for (int d = 1; d <= regular; ++d) labels.push_back(pad_number(d, width));
    if (damage_day > 0) labels.push_back(pad_number(regular, width) + "a");
    return labels;
}

char perspective_letter(Perspective p) {
    switch (p) {
        case Perspective::Left: return 'l';
        case Perspective::Center: return 'c';
        case Perspective::Right: return 'r';
    }
    return '?';
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

}  // namespace

SyntheticDataset generate(const DriftConfig& config) {
    validate(config);
    const int entities = config.num_entities;
    const int perspectives = config.num_perspectives;
    const int days = config.num_days;
    const int dim = config.dim;
    const int damage_day = (days >= 2) ? days : 0;
    const std::uint64_t seed = config.seed;

    constexpr Perspective kPerspectives[] = {Perspective::Left, Perspective::Center,
                                             Perspective::Right};
    const std::vector<std::string> labels = day_labels(days, damage_day);
    const std::size_t entity_width =
        std::max<std::size_t>(2, std::to_string(entities - 1).size());

    SyntheticDataset out;
    for (int d = 1; d <= days; ++d)
        out.manifest.schedule.days.push_back(
            {labels[static_cast<std::size_t>(d - 1)], d == damage_day});
    for (const DriftVariant& variant : config.variants) {
        EmbeddingMatrix matrix;
        matrix.dim = static_cast<std::uint32_t>(dim);
        const std::size_t rows =
            static_cast<std::size_t>(entities) * perspectives * static_cast<std::size_t>(days);
        matrix.data.reserve(rows * static_cast<std::size_t>(dim));
        matrix.row_ids.reserve(rows);
        matrix.norms.reserve(rows);
        out.embeddings.emplace(variant.name, std::move(matrix));
    }

    const auto fill_cache = [&](std::uint64_t role, int index, std::vector<double>& dst) {
        dst.resize(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j)
            dst[static_cast<std::size_t>(j)] = normal_draw(
                {seed, role, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(j)});
    };

    std::vector<std::vector<double>> base(static_cast<std::size_t>(entities));
    std::vector<std::vector<double>> persp(static_cast<std::size_t>(perspectives));
    std::vector<std::vector<double>> damage(static_cast<std::size_t>(entities));
    for (int i = 0; i < entities; ++i) fill_cache(kRoleBase, i, base[static_cast<std::size_t>(i)]);
    for (int v = 0; v < perspectives; ++v)
        fill_cache(kRolePerspective, v, persp[static_cast<std::size_t>(v)]);
    if (damage_day > 0 && config.damage_scale > 0.0)
        for (int i = 0; i < entities; ++i)
            fill_cache(kRoleDamage, i, damage[static_cast<std::size_t>(i)]);

    std::vector<std::vector<double>> walk(static_cast<std::size_t>(entities),
                                          std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    std::vector<double> row(static_cast<std::size_t>(dim));
    std::vector<float> row_f(static_cast<std::size_t>(dim));
    std::uint64_t row_index = 0;

    for (int t = 1; t <= days; ++t) {
        if (t >= 2 && config.drift_step_scale > 0.0)
            for (int i = 0; i < entities; ++i)
                for (int j = 0; j < dim; ++j)
                    walk[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                        config.drift_step_scale *
                        normal_draw({seed, kRoleWalk, static_cast<std::uint64_t>(i),
                                     static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(j)});

        const bool damaged = (t == damage_day);
        for (int i = 0; i < entities; ++i) {
            for (int v = 0; v < perspectives; ++v) {
                const Perspective perspective = kPerspectives[v];
                ImageRecord rec;
                rec.image_id = "e" + pad_number(i, entity_width) + "_" +
                               perspective_letter(perspective) + "_d" +
                               labels[static_cast<std::size_t>(t - 1)];
                rec.entity_id = i;
                rec.perspective = perspective;
                rec.day_index = t;
                rec.day_label = labels[static_cast<std::size_t>(t - 1)];
                rec.damaged = damaged;
                rec.row_index = row_index;

                for (const DriftVariant& variant : config.variants) {
                    const std::uint64_t variant_hash = fnv1a64(variant.name);
                    const double noise_scale = config.observation_noise + variant.extra_noise;
                    for (int j = 0; j < dim; ++j) {
                        const std::size_t sj = static_cast<std::size_t>(j);
                        double value = base[static_cast<std::size_t>(i)][sj] +
                                       config.perspective_scale *
                                           persp[static_cast<std::size_t>(v)][sj] +
                                       walk[static_cast<std::size_t>(i)][sj];
                        if (damaged && config.damage_scale > 0.0)
                            value += config.damage_scale * damage[static_cast<std::size_t>(i)][sj];
                        if (noise_scale > 0.0)
                            value += noise_scale *
                                     normal_draw({seed, kRoleNoise, static_cast<std::uint64_t>(i),
                                                  static_cast<std::uint64_t>(v),
                                                  static_cast<std::uint64_t>(t), variant_hash,
                                                  static_cast<std::uint64_t>(j)});
                        row[sj] = value;
                    }
                    double norm = 0.0;
                    for (const double value : row) norm += value * value;
                    norm = std::sqrt(norm);
                    if (norm < 1e-12)
                        throw DataError("degenerate zero-norm synthetic row '" + rec.image_id + "'");
                    for (int j = 0; j < dim; ++j)
                        row_f[static_cast<std::size_t>(j)] =
                            static_cast<float>(row[static_cast<std::size_t>(j)] / norm);
                    out.embeddings.at(variant.name).add_row(rec.image_id, row_f);
                }

                out.manifest.records.push_back(std::move(rec));
                ++row_index;
            }
        }
    }
    return out;
}

std::string describe(const DriftConfig& config) {
    std::string out;
    out += "entities=" + std::to_string(config.num_entities) + "\n";
    out += "perspectives=" + std::to_string(config.num_perspectives) + "\n";
    out += "days=" + std::to_string(config.num_days) + "\n";
    out += "dim=" + std::to_string(config.dim) + "\n";
    out += "seed=" + std::to_string(config.seed) + "\n";
    out += "perspective_scale=" + format_double(config.perspective_scale) + "\n";
    out += "drift_step_scale=" + format_double(config.drift_step_scale) + "\n";
    out += "damage_scale=" + format_double(config.damage_scale) + "\n";
    out += "observation_noise=" + format_double(config.observation_noise) + "\n";
    for (const DriftVariant& variant : config.variants)
        out += "variant " + variant.name + " extra_noise=" + format_double(variant.extra_noise) +
               "\n";
    return out;
}

}  // namespace reidbench
