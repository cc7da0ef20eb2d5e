#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <reidbench/error.hpp>
#include <reidbench/metrics.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "support.hpp"

using namespace reidbench;
using testsupport::Rng;

namespace {

QueryJudgment make_judgment(int query_entity, std::vector<int> ranked) {
    QueryJudgment j;
    j.query_id = "q";
    j.query_entity = query_entity;
    j.ranked_entities = std::move(ranked);
    return j;
}

// Random judgment over a small entity universe; may have no positive.
QueryJudgment random_judgment(Rng& rng, int num_entities, int max_gallery) {
    QueryJudgment j;
    j.query_entity = rng.range(0, num_entities - 1);
    const int gallery = rng.range(1, max_gallery);
    for (int i = 0; i < gallery; ++i) j.ranked_entities.push_back(rng.range(0, num_entities - 1));
    return j;
}

}  // namespace

TEST_CASE("average precision matches the worked examples") {
    // [A,B,A,C] for query A: (1/1 + 2/3) / 2
    auto ap = average_precision(make_judgment(0, {0, 1, 0, 2}));
    REQUIRE(ap.has_value());
    CHECK(*ap == doctest::Approx(5.0 / 6.0).epsilon(1e-12));

    ap = average_precision(make_judgment(0, {0, 0, 0}));
    REQUIRE(ap.has_value());
    CHECK(*ap == doctest::Approx(1.0).epsilon(1e-12));

    // [B,C,A] for query A: single positive at rank 3
    ap = average_precision(make_judgment(0, {1, 2, 0}));
    REQUIRE(ap.has_value());
    CHECK(*ap == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("average precision signals missing positives") {
    CHECK_FALSE(average_precision(make_judgment(0, {1, 2, 1})).has_value());
}

TEST_CASE("average precision equals the brute-force oracle") {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const QueryJudgment j = random_judgment(rng, 3, 8);
        const auto got = average_precision(j);
        const auto want = testsupport::oracle_average_precision(j.ranked_entities, j.query_entity);
        REQUIRE(got.has_value() == want.has_value());
        if (want) CHECK(*got == doctest::Approx(*want).epsilon(1e-12));
    }
}

TEST_CASE("AP is 1 exactly when all positives precede all negatives") {
    CHECK(*average_precision(make_judgment(0, {0, 0, 1, 2})) == doctest::Approx(1.0));
    CHECK(*average_precision(make_judgment(0, {0, 1, 0})) < 1.0);
}

TEST_CASE("AP ignores negatives ranked after the last positive") {
    const auto base = average_precision(make_judgment(0, {1, 0, 2, 0}));
    const auto padded = average_precision(make_judgment(0, {1, 0, 2, 0, 3, 4, 5}));
    CHECK(*base == *padded);

    // ... and is invariant under permuting those trailing negatives.
    const auto permuted = average_precision(make_judgment(0, {1, 0, 2, 0, 5, 3, 4}));
    CHECK(*padded == *permuted);
}

TEST_CASE("single-positive AP is the reciprocal rank") {
    for (std::size_t rank = 1; rank <= 6; ++rank) {
        std::vector<int> ranked(6, 1);
        ranked[rank - 1] = 0;
        CHECK(*average_precision(make_judgment(0, ranked)) ==
              doctest::Approx(1.0 / static_cast<double>(rank)).epsilon(1e-12));
    }
}

TEST_CASE("micro mAP averages per-query AP") {
    std::vector<QueryJudgment> js = {
        make_judgment(0, {0, 1}),     // AP 1.0
        make_judgment(0, {1, 0, 2}),  // AP 0.5
    };
    const MapResult r = mean_average_precision(js, MapMode::MicroPerQuery);
    CHECK(r.value == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.excluded == 0);

    const MapResult single = mean_average_precision(std::vector<QueryJudgment>{js[1]});
    CHECK(single.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mAP excludes queries with no gallery positive") {
    std::vector<QueryJudgment> js = {
        make_judgment(0, {0, 1}),  // AP 1.0
        make_judgment(7, {0, 1}),  // no positive -> excluded
    };
    const MapResult r = mean_average_precision(js);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.excluded == 1);
}

TEST_CASE("mAP with nothing left to average fails") {
    CHECK_THROWS_AS(mean_average_precision(std::vector<QueryJudgment>{}), EvaluationError);
    std::vector<QueryJudgment> all_excluded = {make_judgment(7, {0, 1})};
    CHECK_THROWS_AS(mean_average_precision(all_excluded), EvaluationError);
}

TEST_CASE("micro mAP equals the oracle on random instances") {
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        std::vector<QueryJudgment> js;
        for (int q = 0; q < 20; ++q) js.push_back(random_judgment(rng, 4, 10));
        double sum = 0.0;
        std::size_t included = 0;
        for (const auto& j : js) {
            if (auto ap = testsupport::oracle_average_precision(j.ranked_entities, j.query_entity)) {
                sum += *ap;
                ++included;
            }
        }
        if (included == 0) {
            CHECK_THROWS_AS(mean_average_precision(js), EvaluationError);
            continue;
        }
        const MapResult r = mean_average_precision(js);
        CHECK(r.value == doctest::Approx(sum / static_cast<double>(included)).epsilon(1e-12));
        CHECK(r.excluded == js.size() - included);
    }
}

TEST_CASE("macro mAP averages per-entity means") {
    std::vector<QueryJudgment> js = {
        make_judgment(0, {0, 1}),     // entity 0, AP 1.0
        make_judgment(0, {1, 0}),     // entity 0, AP 0.5
        make_judgment(1, {1, 0}),     // entity 1, AP 1.0
    };
    const MapResult micro = mean_average_precision(js, MapMode::MicroPerQuery);
    const MapResult macro = mean_average_precision(js, MapMode::MacroPerEntity);
    CHECK(micro.value == doctest::Approx((1.0 + 0.5 + 1.0) / 3.0).epsilon(1e-12));
    CHECK(macro.value == doctest::Approx((0.75 + 1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("macro mAP equals a per-entity oracle on random instances") {
    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        std::vector<QueryJudgment> js;
        for (int q = 0; q < 25; ++q) js.push_back(random_judgment(rng, 3, 8));
        std::map<int, std::pair<double, std::size_t>> buckets;
        for (const auto& j : js) {
            if (auto ap = testsupport::oracle_average_precision(j.ranked_entities, j.query_entity)) {
                buckets[j.query_entity].first += *ap;
                buckets[j.query_entity].second += 1;
            }
        }
        if (buckets.empty()) continue;
        double sum = 0.0;
        for (const auto& [entity, acc] : buckets)
            sum += acc.first / static_cast<double>(acc.second);
        const MapResult macro = mean_average_precision(js, MapMode::MacroPerEntity);
        CHECK(macro.value ==
              doctest::Approx(sum / static_cast<double>(buckets.size())).epsilon(1e-12));
    }
}

TEST_CASE("cmc matches the two-query example") {
    std::vector<QueryJudgment> js = {
        make_judgment(0, {1, 0, 2}),  // first match at rank 2
        make_judgment(0, {0, 1, 2}),  // first match at rank 1
    };
    const std::vector<int> ks = {1, 3};
    const auto acc = cmc(js, ks);
    CHECK(acc.at(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(acc.at(3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cmc saturates beyond the gallery size") {
    std::vector<QueryJudgment> js = {
        make_judgment(0, {1, 2, 0}),
        make_judgment(0, {1, 2, 1}),  // no positive: a miss at every k
    };
    const std::vector<int> ks = {50};
    CHECK(cmc(js, ks).at(50) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cmc equals the first-match oracle and is nondecreasing in k") {
    Rng rng(14);
    const std::vector<int> ks = {1, 2, 3, 5, 8};
    for (int i = 0; i < 100; ++i) {
        std::vector<QueryJudgment> js;
        for (int q = 0; q < 15; ++q) js.push_back(random_judgment(rng, 3, 8));
        const auto acc = cmc(js, ks);
        double prev = 0.0;
        for (int k : ks) {
            std::size_t hits = 0;
            for (const auto& j : js) {
                const std::size_t rank =
                    testsupport::oracle_first_match_rank(j.ranked_entities, j.query_entity);
                if (rank != 0 && rank <= static_cast<std::size_t>(k)) ++hits;
            }
            const double want = static_cast<double>(hits) / static_cast<double>(js.size());
            CHECK(acc.at(k) == doctest::Approx(want).epsilon(1e-12));
            CHECK(acc.at(k) >= prev);
            CHECK(acc.at(k) <= 1.0);
            prev = acc.at(k);
        }
    }
}

TEST_CASE("cmc rejects empty inputs and bad ks") {
    std::vector<QueryJudgment> js = {make_judgment(0, {0})};
    CHECK_THROWS_AS(cmc(js, std::vector<int>{}), ContractError);
    CHECK_THROWS_AS(cmc(js, std::vector<int>{0}), ContractError);
    CHECK_THROWS_AS(cmc(std::vector<QueryJudgment>{}, std::vector<int>{1}), ContractError);
}

TEST_CASE("summarize reproduces the published summary means") {
    // Per-day mAP of the frozen-gallery run (13 query days).
    const std::vector<double> t00_map = {0.74, 0.60, 0.56, 0.53, 0.34, 0.43, 0.29,
                                         0.31, 0.23, 0.14, 0.17, 0.16, 0.12};
    // Per-day Rank-1 of the cumulative run (14 query days).
    const std::vector<double> t01_rank1 = {0.77, 0.97, 0.87, 0.76, 0.89, 0.68, 0.82,
                                           0.82, 0.54, 0.46, 0.41, 0.63, 0.70, 0.75};
    // Per-day mAP of the rolling run (14 query days).
    const std::vector<double> t02_map = {0.65, 0.84, 0.81, 0.67, 0.66, 0.58, 0.60,
                                         0.68, 0.36, 0.43, 0.38, 0.56, 0.63, 0.67};

    CHECK(std::abs(summarize(t00_map).mean - 0.36) < 0.005);
    CHECK(std::abs(summarize(t01_rank1).mean - 0.72) < 0.005);
    CHECK(std::abs(summarize(t02_map).mean - 0.61) < 0.005);

    CHECK(summarize(t00_map).max == doctest::Approx(0.74));
    CHECK(summarize(t00_map).min == doctest::Approx(0.12));
    CHECK(summarize(t01_rank1).max == doctest::Approx(0.97));
    CHECK(summarize(t01_rank1).min == doctest::Approx(0.41));
}

TEST_CASE("summarize handles constant lists and rejects empty ones") {
    const std::vector<double> constant = {0.4, 0.4, 0.4};
    const SummaryStats s = summarize(constant);
    CHECK(s.min == doctest::Approx(0.4));
    CHECK(s.max == doctest::Approx(0.4));
    CHECK(s.mean == doctest::Approx(0.4));
    CHECK(s.stddev == doctest::Approx(0.0));
    CHECK_THROWS_AS(summarize(std::vector<double>{}), ContractError);
}

TEST_CASE("summarize uses the population standard deviation") {
    Rng rng(15);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> values;
        const int n = rng.range(1, 20);
        for (int v = 0; v < n; ++v) values.push_back(rng.unit());
        const SummaryStats s = summarize(values);
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n);  // divide by N, not N-1
        CHECK(s.mean == doctest::Approx(mean).epsilon(1e-12));
        CHECK(s.stddev == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
        CHECK(s.min <= s.mean);
        CHECK(s.mean <= s.max);
    }
}
