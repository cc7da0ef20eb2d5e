// Search-path micro-benchmarks: exact top-k and full ranking over growing
// galleries, plus the batched entry point used by the runner.
#include <cstdint>
#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>
#include <reidbench/embedstore.hpp>

using namespace reidbench;

namespace {

// Cheap xorshift so fixture setup stays out of the measured loop.
struct Xorshift {
    std::uint64_t state;
    explicit Xorshift(std::uint64_t seed) : state(seed | 1) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    float coord() {
        return static_cast<float>(next() >> 40) / static_cast<float>(1 << 24) * 2.0f - 1.0f;
    }
};

EmbeddingMatrix make_gallery(std::size_t count, std::uint32_t dim) {
    Xorshift rng(42);
    EmbeddingMatrix m;
    m.dim = dim;
    std::vector<float> row(dim);
    for (std::size_t r = 0; r < count; ++r) {
        for (float& v : row) v = rng.coord();
        row[0] += 1.0f;
        m.add_row("g" + std::to_string(r), row);
    }
    return m;
}

std::vector<float> make_query(std::uint32_t dim) {
    Xorshift rng(7);
    std::vector<float> q(dim);
    for (float& v : q) v = rng.coord();
    q[0] += 1.0f;
    return q;
}

std::vector<std::uint64_t> all_rows(std::size_t count) {
    std::vector<std::uint64_t> rows(count);
    std::iota(rows.begin(), rows.end(), std::uint64_t{0});
    return rows;
}

void bm_search_topk(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const EmbeddingMatrix m = make_gallery(count, 128);
    const std::vector<std::uint64_t> rows = all_rows(count);
    const std::vector<float> query = make_query(128);
    for (auto _ : state) {
        RankedResult r = search_topk(m, rows, query, 10, DistanceMetric::CosineDistance);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}

void bm_search_full(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const EmbeddingMatrix m = make_gallery(count, 128);
    const std::vector<std::uint64_t> rows = all_rows(count);
    const std::vector<float> query = make_query(128);
    for (auto _ : state) {
        RankedResult r = search_full(m, rows, query, DistanceMetric::CosineDistance);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}

void bm_batch_search(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const EmbeddingMatrix gallery = make_gallery(count, 128);
    const EmbeddingMatrix query_store = make_gallery(64, 128);
    const std::vector<std::uint64_t> gallery_rows = all_rows(count);
    std::vector<QueryVector> queries;
    queries.reserve(64);
    for (std::uint64_t r = 0; r < 64; ++r)
        queries.push_back({query_store.row_ids[r], query_store.row(r)});
    for (auto _ : state) {
        auto r = batch_search(gallery, gallery_rows, queries, 10,
                              DistanceMetric::CosineDistance);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count) * 64);
}

}  // namespace

BENCHMARK(bm_search_topk)->Arg(180)->Arg(720)->Arg(2520)->Arg(10000);
BENCHMARK(bm_search_full)->Arg(180)->Arg(720)->Arg(2520)->Arg(10000);
BENCHMARK(bm_batch_search)->Arg(180)->Arg(720)->Arg(2520);

BENCHMARK_MAIN();
