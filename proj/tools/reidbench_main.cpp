#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reidbench/driftsim.hpp"
#include "reidbench/error.hpp"
#include "reidbench/io.hpp"
#include "reidbench/manifest.hpp"
#include "reidbench/report.hpp"
#include "reidbench/runner.hpp"

namespace {

namespace fs = std::filesystem;

void run_simulate(const std::string& config_path, const std::string& out_dir) {
    const reidbench::DriftConfig config = reidbench::load_drift_config(config_path);
    const reidbench::SyntheticDataset dataset = reidbench::generate(config);

    const fs::path out(out_dir);
    const fs::path manifest_path = out / "manifest.csv";
    reidbench::write_file(manifest_path, reidbench::emit_manifest(dataset.manifest.records),
                          "manifest");
    std::cerr << "wrote " << manifest_path.string() << " (" << dataset.manifest.records.size()
              << " records)\n";
    for (const auto& [name, matrix] : dataset.embeddings) {
        const fs::path embed_path = out / ("embeddings_" + name + ".pbeb");
        reidbench::save_embeddings(matrix, embed_path);
        std::cerr << "wrote " << embed_path.string() << " (" << matrix.count() << " rows, dim "
                  << matrix.dim << ")\n";
    }
}

void run_run(const std::string& config_path, const std::string& variant, bool timings) {
    const reidbench::ExperimentConfig config = reidbench::load_experiment_config(config_path);

    std::vector<std::string> variants;
    if (variant.empty()) {
        for (const auto& [name, path] : config.embeddings) variants.push_back(name);
    } else {
        variants.push_back(variant);
    }

    const reidbench::Manifest manifest = reidbench::load_manifest(config.manifest_path);
    for (const std::string& name : variants) {
        const auto it = config.embeddings.find(name);
        if (it == config.embeddings.end())
            throw reidbench::ValidationError("variant '" + name +
                                             "' is not present in the config embeddings");
        const reidbench::EmbeddingMatrix embeddings = reidbench::load_embeddings(it->second);
        const reidbench::ExperimentReport report =
            reidbench::run_experiment(config, name, manifest, embeddings, timings);
        for (const std::string& warning : report.warnings)
            std::cerr << "warning: " << warning << "\n";

        const fs::path base = config.output_dir / (config.experiment_name + "_" + name);
        fs::path csv_path = base, md_path = base, json_path = base;
        csv_path += ".csv";
        md_path += ".md";
        json_path += ".json";
        reidbench::write_file(csv_path,
                              reidbench::emit_report(report, reidbench::ReportFormat::CSV),
                              "report");
        reidbench::write_file(md_path,
                              reidbench::emit_report(report, reidbench::ReportFormat::Markdown),
                              "report");
        reidbench::write_file(json_path, reidbench::emit_sidecar(report), "report sidecar");
        std::cerr << "wrote " << csv_path.string() << " " << md_path.string() << " "
                  << json_path.string() << "\n";
    }
}

void run_compare(const std::vector<std::string>& inputs, const std::string& out_path) {
    std::vector<reidbench::ExperimentReport> reports;
    for (const std::string& input : inputs) {
        const fs::path path(input);
        fs::path sidecar = path;
        sidecar.replace_extension(".json");
        if (path.extension() == ".json") {
            reports.push_back(reidbench::load_report_sidecar(path));
        } else if (fs::exists(sidecar)) {
            // Prefer the full-precision sidecar over the rounded table.
            std::cerr << "using sidecar " << sidecar.string() << " for " << input << "\n";
            reports.push_back(reidbench::load_report_sidecar(sidecar));
        } else {
            reports.push_back(reidbench::load_report_csv(path));
        }
    }
    const reidbench::ComparisonReport comparison = reidbench::compare_runs(reports);
    reidbench::write_file(out_path, reidbench::emit_comparison(comparison), "comparison report");
    std::cerr << "wrote " << out_path << "\n";
}

void run_validate(const std::string& manifest_path, int entities, int perspectives,
                  long long expected) {
    const reidbench::Manifest manifest = reidbench::load_manifest(manifest_path);

    reidbench::DatasetShape shape;
    if (entities > 0) {
        shape.num_entities = entities;
    } else {
        std::set<int> distinct;
        for (const reidbench::ImageRecord& rec : manifest.records) distinct.insert(rec.entity_id);
        shape.num_entities = static_cast<int>(distinct.size());
    }
    if (perspectives > 0) {
        shape.perspectives_per_entity = perspectives;
    } else {
        std::set<reidbench::Perspective> distinct;
        for (const reidbench::ImageRecord& rec : manifest.records) distinct.insert(rec.perspective);
        shape.perspectives_per_entity = static_cast<int>(distinct.size());
    }
    shape.expected_total =
        (expected >= 0)
            ? static_cast<std::size_t>(expected)
            : static_cast<std::size_t>(shape.num_entities) * shape.perspectives_per_entity *
                  static_cast<std::size_t>(manifest.schedule.num_days());

    const reidbench::ValidationReport report =
        reidbench::validate_dataset(manifest.records, shape);
    std::cout << reidbench::to_text(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"re-identification gallery lifecycle benchmark"};
    app.require_subcommand(1);

    std::string sim_config, sim_out;
    CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic drifted dataset");
    simulate->add_option("--config", sim_config, "simulation config JSON")->required();
    simulate->add_option("--out", sim_out, "output directory")->required();
    simulate->callback([&] { run_simulate(sim_config, sim_out); });

    std::string run_config, run_variant;
    bool run_timings = false;
    CLI::App* run = app.add_subcommand("run", "run an experiment and emit reports");
    run->add_option("--config", run_config, "experiment config JSON")->required();
    run->add_option("--variant", run_variant, "embedding variant (default: all in config)");
    run->add_flag("--timings", run_timings,
                  "record per-step wall-clock in the JSON sidecar (off by default so equal "
                  "configs give byte-identical outputs)");
    run->callback([&] { run_run(run_config, run_variant, run_timings); });

    std::vector<std::string> compare_inputs;
    std::string compare_out;
    CLI::App* compare = app.add_subcommand("compare", "compare two or more emitted reports");
    compare->add_option("reports", compare_inputs, "report files (.csv or .json sidecars)")
        ->required()
        ->expected(2, -1);
    compare->add_option("--out", compare_out, "comparison output file")->required();
    compare->callback([&] { run_compare(compare_inputs, compare_out); });

    std::string validate_manifest;
    int validate_entities = 0, validate_perspectives = 0;
    long long validate_expected = -1;
    CLI::App* validate = app.add_subcommand("validate", "report dataset coverage for a manifest");
    validate->add_option("--manifest", validate_manifest, "manifest CSV")->required();
    validate->add_option("--entities", validate_entities,
                         "expected entity count (default: distinct ids in the manifest)");
    validate->add_option("--perspectives", validate_perspectives,
                         "expected perspectives per entity (default: distinct in the manifest)");
    validate->add_option("--expected", validate_expected,
                         "expected total record count (default: full cross product)");
    validate->callback(
        [&] { run_validate(validate_manifest, validate_entities, validate_perspectives,
                           validate_expected); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << "run '" << (argc > 0 ? argv[0] : "reidbench") << " --help' for usage\n";
        return 1;
    } catch (const reidbench::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
