#include "reidbench/embedstore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <queue>
#include <thread>
#include <unordered_set>

#include "reidbench/error.hpp"
#include "reidbench/io.hpp"

namespace reidbench {

namespace {

constexpr double kZeroNormFloor = 1e-12;

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int shift = 0; shift < 64; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

struct ByteReader {
    std::string_view bytes;
    std::size_t offset = 0;

    std::size_t remaining() const { return bytes.size() - offset; }

    void need(std::size_t n, const char* what) {
        if (remaining() < n)
            throw FormatError(std::string("truncated embedding file while reading ") + what);
    }

    std::uint8_t u8() { return static_cast<std::uint8_t>(bytes[offset++]); }

    std::uint16_t u16(const char* what) {
        need(2, what);
        std::uint16_t v = u8();
        v |= static_cast<std::uint16_t>(u8()) << 8;
        return v;
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int shift = 0; shift < 32; shift += 8) v |= static_cast<std::uint32_t>(u8()) << shift;
        return v;
    }

    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int shift = 0; shift < 64; shift += 8) v |= static_cast<std::uint64_t>(u8()) << shift;
        return v;
    }
};

double row_norm(std::span<const float> values) {
    double acc = 0.0;
    for (const float v : values) acc += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(acc);
}

bool entry_less(const RankedEntry& a, const RankedEntry& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.row_index < b.row_index;
}

// Per-query distance evaluator; precomputes the query norm once.
struct RowScorer {
    const EmbeddingMatrix& matrix;
    std::span<const float> query;
    DistanceMetric metric;
    double query_norm = 0.0;

    RowScorer(const EmbeddingMatrix& m, std::span<const float> q, DistanceMetric me)
        : matrix(m), query(q), metric(me) {
        if (metric == DistanceMetric::CosineDistance) {
            query_norm = row_norm(query);
            if (query_norm < kZeroNormFloor)
                throw ContractError("query vector has zero norm; cosine distance is undefined");
        }
    }

    double operator()(std::uint64_t row) const {
        const float* g = matrix.data.data() + row * matrix.dim;
        const float* q = query.data();
        if (metric == DistanceMetric::CosineDistance) {
            double dot = 0.0;
            for (std::uint32_t i = 0; i < matrix.dim; ++i)
                dot += static_cast<double>(g[i]) * static_cast<double>(q[i]);
            return 1.0 - dot / (matrix.norms[row] * query_norm);
        }
        double acc = 0.0;
        for (std::uint32_t i = 0; i < matrix.dim; ++i) {
            const double d = static_cast<double>(g[i]) - static_cast<double>(q[i]);
            acc += d * d;
        }
        return acc;
    }
};

void check_search_args(const EmbeddingMatrix& matrix, std::span<const std::uint64_t> gallery_rows,
                       std::span<const float> query, std::size_t k, DistanceMetric metric) {
    if (query.size() != matrix.dim)
        throw ContractError("query dimension " + std::to_string(query.size()) +
                            " does not match matrix dimension " + std::to_string(matrix.dim));
    if (gallery_rows.empty()) throw ContractError("gallery_rows is empty");
    if (k == 0) throw ContractError("k must be >= 1");
    for (const std::uint64_t row : gallery_rows)
        if (row >= matrix.count())
            throw ContractError("gallery row index " + std::to_string(row) +
                                " out of range (count " + std::to_string(matrix.count()) + ")");
    if (metric == DistanceMetric::CosineDistance && matrix.norms.size() != matrix.count())
        throw ContractError("norm cache missing; load or build the matrix through add_row");
}

}  // namespace

const char* to_string(DistanceMetric metric) {
    switch (metric) {
        case DistanceMetric::CosineDistance: return "cosine";
        case DistanceMetric::SquaredEuclidean: return "sqeuclidean";
    }
    throw ContractError("invalid metric enum value");
}

DistanceMetric parse_metric(const std::string& token) {
    if (token == "cosine") return DistanceMetric::CosineDistance;
    if (token == "sqeuclidean") return DistanceMetric::SquaredEuclidean;
    throw ValidationError("unknown distance metric: '" + token + "'");
}

void EmbeddingMatrix::add_row(std::string id, std::span<const float> values) {
    if (dim == 0) throw ContractError("matrix dimension is unset");
    if (values.size() != dim)
        throw ContractError("row dimension " + std::to_string(values.size()) +
                            " does not match matrix dimension " + std::to_string(dim));
    const double norm = row_norm(values);
    if (norm < kZeroNormFloor) throw DataError("zero-norm row '" + id + "' rejected");
    if (std::find(row_ids.begin(), row_ids.end(), id) != row_ids.end())
        throw DataError("duplicate row id '" + id + "'");
    data.insert(data.end(), values.begin(), values.end());
    row_ids.push_back(std::move(id));
    norms.push_back(norm);
}

std::string encode_pbeb(const EmbeddingMatrix& matrix) {
    if (matrix.dim == 0) throw ContractError("matrix dimension must be positive");
    if (matrix.data.size() != matrix.count() * matrix.dim)
        throw ContractError("matrix data size does not match count x dim");

    std::string out;
    out.reserve(18 + matrix.data.size() * 4 + matrix.count() * 12);
    out += "PBEB";
    put_u16(out, 1);
    put_u32(out, matrix.dim);
    put_u64(out, matrix.count());
    for (const float v : matrix.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
    for (const std::string& id : matrix.row_ids) {
        if (id.size() > 0xffff)
            throw ValidationError("row id '" + id.substr(0, 32) + "...' exceeds 65535 bytes");
        put_u16(out, static_cast<std::uint16_t>(id.size()));
        out += id;
    }
    return out;
}

EmbeddingMatrix decode_pbeb(std::string_view bytes) {
    ByteReader reader{bytes};
    reader.need(4, "magic");
    if (bytes.substr(0, 4) != "PBEB") throw FormatError("bad magic, not a PBEB embedding file");
    reader.offset = 4;
    const std::uint16_t version = reader.u16("version");
    if (version != 1)
        throw FormatError("unsupported PBEB format version " + std::to_string(version));

    EmbeddingMatrix matrix;
    matrix.dim = reader.u32("dim");
    if (matrix.dim == 0) throw FormatError("embedding dimension must be positive");
    const std::uint64_t count = reader.u64("count");

    const std::uint64_t row_bytes = static_cast<std::uint64_t>(matrix.dim) * 4;
    if (count > reader.remaining() / row_bytes)
        throw FormatError("truncated embedding file: declared count " + std::to_string(count) +
                          " exceeds available payload rows");

    matrix.data.resize(static_cast<std::size_t>(count) * matrix.dim);
    for (float& v : matrix.data) v = std::bit_cast<float>(reader.u32("row data"));

    matrix.row_ids.reserve(static_cast<std::size_t>(count));
    std::unordered_set<std::string_view> seen;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint16_t len = reader.u16("row id length");
        reader.need(len, "row id bytes");
        matrix.row_ids.emplace_back(bytes.substr(reader.offset, len));
        reader.offset += len;
    }
    for (const std::string& id : matrix.row_ids)
        if (!seen.insert(id).second) throw DataError("duplicate row id '" + id + "'");
    if (reader.remaining() != 0)
        throw FormatError("trailing bytes after embedding payload (" +
                          std::to_string(reader.remaining()) + " extra)");

    matrix.norms.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
        const double norm = row_norm(matrix.row(static_cast<std::size_t>(i)));
        if (norm < kZeroNormFloor)
            throw DataError("zero-norm row " + std::to_string(i) + " ('" + matrix.row_ids[i] +
                            "')");
        matrix.norms.push_back(norm);
    }
    return matrix;
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
    return decode_pbeb(read_file(path, "embedding file"));
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
    write_file(path, encode_pbeb(matrix), "embedding file");
}

double pair_distance(std::span<const float> a, std::span<const float> b, DistanceMetric metric) {
    if (a.size() != b.size())
        throw ContractError("vector dimensions differ: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
    if (metric == DistanceMetric::CosineDistance) {
        double dot = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
        const double na = row_norm(a);
        const double nb = row_norm(b);
        if (na < kZeroNormFloor || nb < kZeroNormFloor)
            throw ContractError("zero-norm vector; cosine distance is undefined");
        return 1.0 - dot / (na * nb);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += d * d;
    }
    return acc;
}

RankedResult search_topk(const EmbeddingMatrix& matrix, std::span<const std::uint64_t> gallery_rows,
                         std::span<const float> query, std::size_t k, DistanceMetric metric,
                         std::string query_id) {
    check_search_args(matrix, gallery_rows, query, k, metric);
    const RowScorer score(matrix, query, metric);

    // Max-heap of the k best (distance, row_index) pairs seen so far.
    std::priority_queue<RankedEntry, std::vector<RankedEntry>, decltype(&entry_less)> heap(
        &entry_less);
    for (const std::uint64_t row : gallery_rows) {
        const RankedEntry candidate{row, score(row)};
        if (heap.size() < k) {
            heap.push(candidate);
        } else if (entry_less(candidate, heap.top())) {
            heap.pop();
            heap.push(candidate);
        }
    }

    RankedResult result;
    result.query_id = std::move(query_id);
    result.entries.resize(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
        result.entries[i] = heap.top();
        heap.pop();
    }
    return result;
}

RankedResult search_full(const EmbeddingMatrix& matrix, std::span<const std::uint64_t> gallery_rows,
                         std::span<const float> query, DistanceMetric metric,
                         std::string query_id) {
    check_search_args(matrix, gallery_rows, query, gallery_rows.size(), metric);
    const RowScorer score(matrix, query, metric);

    RankedResult result;
    result.query_id = std::move(query_id);
    result.entries.reserve(gallery_rows.size());
    for (const std::uint64_t row : gallery_rows) result.entries.push_back({row, score(row)});
    std::sort(result.entries.begin(), result.entries.end(), entry_less);
    return result;
}

std::vector<RankedResult> batch_search(const EmbeddingMatrix& matrix,
                                       std::span<const std::uint64_t> gallery_rows,
                                       std::span<const QueryVector> queries, std::size_t k,
                                       DistanceMetric metric) {
    std::vector<RankedResult> results(queries.size());
    if (queries.empty()) return results;

    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            results[i] =
                search_topk(matrix, gallery_rows, queries[i].values, k, metric, queries[i].query_id);
    };

    const unsigned hardware = std::thread::hardware_concurrency();
    if (hardware > 1 && queries.size() > 1) {
        const std::size_t chunks = std::min<std::size_t>(hardware, queries.size());
        std::vector<std::future<void>> futures;
        futures.reserve(chunks);
        const std::size_t per_chunk = (queries.size() + chunks - 1) / chunks;
        for (std::size_t begin = 0; begin < queries.size(); begin += per_chunk)
            futures.push_back(std::async(std::launch::async, worker, begin,
                                         std::min(begin + per_chunk, queries.size())));
        for (std::future<void>& f : futures) f.get();
    } else {
        worker(0, queries.size());
    }
    return results;
}

}  // namespace reidbench
