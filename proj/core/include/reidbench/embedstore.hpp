#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reidbench {

enum class DistanceMetric { CosineDistance, SquaredEuclidean };

const char* to_string(DistanceMetric metric);
DistanceMetric parse_metric(const std::string& token);

// Dense row-major store of fixed-dimension float32 embeddings. Immutable
// after construction/load; concurrent read-only access is safe.
struct EmbeddingMatrix {
    std::uint32_t dim = 0;
    std::vector<float> data;           // count × dim, row-major
    std::vector<std::string> row_ids;  // length = count, unique
    std::vector<double> norms;         // cached Euclidean norms, length = count

    std::size_t count() const { return row_ids.size(); }

    std::span<const float> row(std::size_t index) const {
        return std::span<const float>(data).subspan(index * dim, dim);
    }

    // Appends a row and caches its norm; values.size() must equal dim.
    // Rejects zero-norm rows (cosine distance would be undefined).
    void add_row(std::string id, std::span<const float> values);
};

struct RankedEntry {
    std::uint64_t row_index = 0;
    double distance = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

// Entries ascending by (distance, row_index); exact, deterministic.
struct RankedResult {
    std::string query_id;
    std::vector<RankedEntry> entries;

    friend bool operator==(const RankedResult&, const RankedResult&) = default;
};

struct QueryVector {
    std::string query_id;
    std::span<const float> values;
};

// PBEB, little-endian: "PBEB", version u16 = 1, dim u32, count u64,
// count×dim float32 row-major, then count row ids (u16 length + UTF-8
// bytes). Trailing bytes are a format error.
std::string encode_pbeb(const EmbeddingMatrix& matrix);
EmbeddingMatrix decode_pbeb(std::string_view bytes);

EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);

// Distance between two raw vectors; accumulates in double precision.
double pair_distance(std::span<const float> a, std::span<const float> b, DistanceMetric metric);

// Exact top-k over the listed gallery rows: single pass with a bounded
// max-heap, ties broken by ascending row_index.
RankedResult search_topk(const EmbeddingMatrix& matrix, std::span<const std::uint64_t> gallery_rows,
                         std::span<const float> query, std::size_t k, DistanceMetric metric,
                         std::string query_id = {});

// Full ranking (k = |gallery_rows|) via flat sort.
RankedResult search_full(const EmbeddingMatrix& matrix, std::span<const std::uint64_t> gallery_rows,
                         std::span<const float> query, DistanceMetric metric,
                         std::string query_id = {});

// Elementwise identical to independent search_topk calls; queries may be
// evaluated concurrently against the read-only matrix.
std::vector<RankedResult> batch_search(const EmbeddingMatrix& matrix,
                                       std::span<const std::uint64_t> gallery_rows,
                                       std::span<const QueryVector> queries, std::size_t k,
                                       DistanceMetric metric);

}  // namespace reidbench
