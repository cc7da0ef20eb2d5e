#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <reidbench/report.hpp>
#include <reidbench/runner.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "support.hpp"

using namespace reidbench;
namespace fs = std::filesystem;

namespace {

const char* kCli = REIDBENCH_CLI_PATH;
const char* kConfigDir = REIDBENCH_CONFIG_DIR;

// Small dataset so CLI round-trips stay fast; the shipped full-size configs
// are exercised by the acceptance suite.
const char* kSimConfig = R"({
  "num_entities": 10, "num_perspectives": 3, "num_days": 6, "dim": 24, "seed": 7,
  "perspective_scale": 0.25, "drift_step_scale": 1.6, "damage_scale": 14.0,
  "observation_noise": 2.0,
  "variants": [{"name": "clean", "extra_noise": 0.0}, {"name": "noisy", "extra_noise": 0.5}]
})";

std::string experiment_config(const std::string& name, const std::string& policy) {
    return std::string("{\n") +
           "  \"experiment_name\": \"" + name + "\",\n" +
           "  \"manifest\": \"data/manifest.csv\",\n" +
           "  \"embeddings\": {\"clean\": \"data/embeddings_clean.pbeb\",\n" +
           "                   \"noisy\": \"data/embeddings_noisy.pbeb\"},\n" +
           "  \"policy\": " + policy + ",\n" +
           "  \"metric\": \"cosine\", \"ranks\": [1, 3, 5, 10], \"map_mode\": \"micro\",\n" +
           "  \"output_dir\": \"reports\", \"seed\": 7\n" +
           "}\n";
}

void write_workspace(const fs::path& dir) {
    testsupport::write_text(dir / "sim.json", kSimConfig);
    testsupport::write_text(dir / "t00.json",
                            experiment_config("t00", R"({"kind": "fixed", "days": [1, 2]})"));
    testsupport::write_text(dir / "t01.json",
                            experiment_config("t01", R"({"kind": "cumulative", "start_day": 1})"));
}

testsupport::CommandResult cli(const std::vector<std::string>& args, const fs::path& cwd) {
    std::vector<std::string> argv{kCli};
    argv.insert(argv.end(), args.begin(), args.end());
    return testsupport::run_command(argv, cwd);
}

void simulate_into(const fs::path& dir) {
    const auto result = cli({"simulate", "--config", "sim.json", "--out", "data"}, dir);
    REQUIRE(result.exit_code == 0);
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
    testsupport::TempDir dir;
    const auto none = cli({}, dir.path());
    CHECK(none.exit_code == 1);
    CHECK(none.err.find("usage error") != std::string::npos);

    const auto unknown = cli({"run", "--nonsense"}, dir.path());
    CHECK(unknown.exit_code == 1);
    CHECK(unknown.err.find("usage error") != std::string::npos);

    const auto missing_option = cli({"run"}, dir.path());
    CHECK(missing_option.exit_code == 1);

    const auto bad_subcommand = cli({"frobnicate"}, dir.path());
    CHECK(bad_subcommand.exit_code == 1);
}

TEST_CASE("data errors exit with code 2") {
    testsupport::TempDir dir;
    const auto missing = cli({"run", "--config", "missing.json"}, dir.path());
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("error:") != std::string::npos);

    write_workspace(dir.path());
    testsupport::write_text(dir.path() / "data" / "manifest.csv", "this,is,not\na,manifest\n");
    const auto corrupt = cli({"run", "--config", "t01.json"}, dir.path());
    CHECK(corrupt.exit_code == 2);
    CHECK(corrupt.err.find("error:") != std::string::npos);
}

TEST_CASE("simulate writes the dataset and is reproducible") {
    testsupport::TempDir a;
    write_workspace(a.path());
    const auto result = cli({"simulate", "--config", "sim.json", "--out", "data"}, a.path());
    CHECK(result.exit_code == 0);
    CHECK(result.err.find("wrote") != std::string::npos);
    CHECK(fs::exists(a.path() / "data" / "manifest.csv"));
    CHECK(fs::exists(a.path() / "data" / "embeddings_clean.pbeb"));
    CHECK(fs::exists(a.path() / "data" / "embeddings_noisy.pbeb"));

    testsupport::TempDir b;
    write_workspace(b.path());
    simulate_into(b.path());
    for (const char* file :
         {"manifest.csv", "embeddings_clean.pbeb", "embeddings_noisy.pbeb"}) {
        CHECK(testsupport::read_text(a.path() / "data" / file) ==
              testsupport::read_text(b.path() / "data" / file));
    }
}

TEST_CASE("run emits csv, markdown, and sidecar per variant") {
    testsupport::TempDir dir;
    write_workspace(dir.path());
    simulate_into(dir.path());

    const auto result = cli({"run", "--config", "t01.json"}, dir.path());
    REQUIRE(result.exit_code == 0);
    for (const char* variant : {"clean", "noisy"})
        for (const char* ext : {".csv", ".md", ".json"})
            CHECK(fs::exists(dir.path() / "reports" / ("t01_" + std::string(variant) + ext)));

    const std::string csv = testsupport::read_text(dir.path() / "reports" / "t01_clean.csv");
    CHECK(csv.starts_with("# reidbench report v1\n"));
    CHECK(csv.find("# experiment: t01\n") != std::string::npos);
    CHECK(csv.find("query_day,map,rank1,rank3,rank5,rank10\n") != std::string::npos);

    // Timings stay out of the sidecar unless asked for.
    const std::string sidecar = testsupport::read_text(dir.path() / "reports" / "t01_clean.json");
    CHECK(sidecar.find("wall_ms") == std::string::npos);

    const ExperimentReport report =
        load_report_sidecar(dir.path() / "reports" / "t01_clean.json");
    CHECK(report.rows.size() == 5);  // query days 2..6
    CHECK(report.variant == "clean");
}

TEST_CASE("run restricted to one variant leaves the others alone") {
    testsupport::TempDir dir;
    write_workspace(dir.path());
    simulate_into(dir.path());
    const auto result = cli({"run", "--config", "t00.json", "--variant", "clean"}, dir.path());
    REQUIRE(result.exit_code == 0);
    CHECK(fs::exists(dir.path() / "reports" / "t00_clean.csv"));
    CHECK_FALSE(fs::exists(dir.path() / "reports" / "t00_noisy.csv"));

    const auto bad = cli({"run", "--config", "t00.json", "--variant", "crisp"}, dir.path());
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("crisp") != std::string::npos);
}

TEST_CASE("the timings flag adds wall_ms to the sidecar only") {
    testsupport::TempDir dir;
    write_workspace(dir.path());
    simulate_into(dir.path());
    const auto result =
        cli({"run", "--config", "t01.json", "--variant", "clean", "--timings"}, dir.path());
    REQUIRE(result.exit_code == 0);
    const std::string sidecar = testsupport::read_text(dir.path() / "reports" / "t01_clean.json");
    CHECK(sidecar.find("wall_ms") != std::string::npos);
    const std::string csv = testsupport::read_text(dir.path() / "reports" / "t01_clean.csv");
    CHECK(csv.find("wall_ms") == std::string::npos);
}

TEST_CASE("repeated runs produce byte-identical reports") {
    testsupport::TempDir dir;
    write_workspace(dir.path());
    simulate_into(dir.path());
    REQUIRE(cli({"run", "--config", "t01.json", "--variant", "clean"}, dir.path()).exit_code == 0);
    const std::string first_csv = testsupport::read_text(dir.path() / "reports" / "t01_clean.csv");
    const std::string first_json =
        testsupport::read_text(dir.path() / "reports" / "t01_clean.json");
    REQUIRE(cli({"run", "--config", "t01.json", "--variant", "clean"}, dir.path()).exit_code == 0);
    CHECK(testsupport::read_text(dir.path() / "reports" / "t01_clean.csv") == first_csv);
    CHECK(testsupport::read_text(dir.path() / "reports" / "t01_clean.json") == first_json);
}

TEST_CASE("compare prefers sidecars and reproduces the library comparison") {
    testsupport::TempDir dir;
    write_workspace(dir.path());
    simulate_into(dir.path());
    REQUIRE(cli({"run", "--config", "t00.json"}, dir.path()).exit_code == 0);
    REQUIRE(cli({"run", "--config", "t01.json"}, dir.path()).exit_code == 0);

    const auto result = cli({"compare", "reports/t00_clean.csv", "reports/t01_clean.csv",
                             "--out", "reports/comparison.csv"},
                            dir.path());
    REQUIRE(result.exit_code == 0);
    CHECK(result.err.find("using sidecar") != std::string::npos);

    const std::vector<ExperimentReport> reports{
        load_report_sidecar(dir.path() / "reports" / "t00_clean.json"),
        load_report_sidecar(dir.path() / "reports" / "t01_clean.json")};
    const std::string expected = emit_comparison(compare_runs(reports));
    CHECK(testsupport::read_text(dir.path() / "reports" / "comparison.csv") == expected);
    CHECK(expected.find("delta,t00/clean-t01/clean,") != std::string::npos);
}

TEST_CASE("compare falls back to the rounded CSV when no sidecar exists") {
    testsupport::TempDir dir;
    write_workspace(dir.path());
    simulate_into(dir.path());
    REQUIRE(cli({"run", "--config", "t01.json"}, dir.path()).exit_code == 0);
    fs::remove(dir.path() / "reports" / "t01_clean.json");
    fs::remove(dir.path() / "reports" / "t01_noisy.json");
    const auto result = cli({"compare", "reports/t01_clean.csv", "reports/t01_noisy.csv",
                             "--out", "reports/comparison.csv"},
                            dir.path());
    REQUIRE(result.exit_code == 0);
    CHECK(result.err.find("using sidecar") == std::string::npos);
    const std::string csv = testsupport::read_text(dir.path() / "reports" / "comparison.csv");
    CHECK(csv.find("t01,clean,") != std::string::npos);
    CHECK(csv.find("delta,t01/clean-t01/noisy,") != std::string::npos);

    const auto too_few =
        cli({"compare", "reports/t01_clean.csv", "--out", "reports/x.csv"}, dir.path());
    CHECK(too_few.exit_code == 1);  // expected(2, -1) makes one input a usage error
}

TEST_CASE("validate reports coverage to stdout") {
    testsupport::TempDir dir;
    write_workspace(dir.path());
    simulate_into(dir.path());
    const auto result = cli({"validate", "--manifest", "data/manifest.csv"}, dir.path());
    REQUIRE(result.exit_code == 0);
    CHECK(result.out.find("records 180, expected 180 (match)") != std::string::npos);
    CHECK(result.out.find("missing pairs 0") != std::string::npos);

    // Advisory only: a mismatched shape still exits 0 but says MISMATCH.
    const auto mismatch =
        cli({"validate", "--manifest", "data/manifest.csv", "--entities", "11"}, dir.path());
    CHECK(mismatch.exit_code == 0);
    CHECK(mismatch.out.find("MISMATCH") != std::string::npos);
}

TEST_CASE("the shipped configs parse cleanly") {
    const fs::path configs(kConfigDir);
    const DriftConfig sim = load_drift_config(configs / "simulate.json");
    CHECK(sim.num_entities == 60);
    CHECK(sim.num_days == 15);
    CHECK(sim.dim == 128);
    REQUIRE(sim.variants.size() == 2);
    CHECK(sim.variants[0].name == "clean");
    CHECK(sim.variants[1].name == "noisy");

    const ExperimentConfig t00 = load_experiment_config(configs / "t00.json");
    CHECK(std::get<FixedPolicy>(t00.policy).days == std::vector<int>{1, 2});
    const ExperimentConfig t01 = load_experiment_config(configs / "t01.json");
    CHECK(std::get<CumulativePolicy>(t01.policy).start_day == 1);
    const ExperimentConfig t02 = load_experiment_config(configs / "t02.json");
    CHECK(std::get<RollingPolicy>(t02.policy).window == 1);
    for (const ExperimentConfig* config : {&t00, &t01, &t02}) {
        CHECK(config->metric == DistanceMetric::CosineDistance);
        CHECK(config->map_mode == MapMode::MicroPerQuery);
        CHECK(config->ranks == std::vector<int>{1, 3, 5, 10});
        CHECK(config->embeddings.size() == 2);
    }
}
