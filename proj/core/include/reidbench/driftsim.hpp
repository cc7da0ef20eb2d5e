#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reidbench/embedstore.hpp"
#include "reidbench/manifest.hpp"

namespace reidbench {

struct DriftVariant {
    std::string name;
    double extra_noise = 0.0;
};

// Defaults are calibrated so the gallery-policy orderings (cumulative and
// rolling beating a frozen gallery, decline over time, damage-day shock)
// emerge clearly at the default scale; see configs/simulate.json.
struct DriftConfig {
    int num_entities = 60;
    int num_perspectives = 3;
    int num_days = 15;  // last day is the damage day (when >= 2 days)
    int dim = 128;
    std::uint64_t seed = 42;
    double perspective_scale = 0.25;  // alpha
    double drift_step_scale = 1.6;    // sigma_d, per-day random-walk step
    double damage_scale = 14.0;       // gamma, one-shot damage-day kick
    double observation_noise = 2.0;   // epsilon, per-image noise
    std::vector<DriftVariant> variants = {{"clean", 0.0}, {"noisy", 0.5}};
};

struct SyntheticDataset {
    Manifest manifest;
    std::map<std::string, EmbeddingMatrix> embeddings;  // variant name -> matrix
};

// Embedding of (entity i, perspective v, day t, variant m):
//   normalize(b_i + alpha*p_v + sigma_d * sum_{s=2..t} delta_{i,s}
//             + [t = damage day] gamma*u_i + (epsilon + extra_m) * eta_{i,v,t,m})
// with all term vectors standard normal from the counter-based generator,
// keyed by (seed, role, indices). Bit-identical for equal configs.
SyntheticDataset generate(const DriftConfig& config);

// Deterministic one-line-per-field parameter summary.
std::string describe(const DriftConfig& config);

}  // namespace reidbench
