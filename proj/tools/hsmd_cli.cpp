// Command-line front end: `hsmd run` processes a dataset tree, `hsmd rank`
// combines metrics from several runs into one rank table.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsmd/config.hpp"
#include "hsmd/pipeline.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Hybrid spiking motion detector"};
    app.require_subcommand(1);

    hsmd::RunConfig cfg;
    std::string dataset;
    std::string config_file;
    std::string kernel;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::optional<int> lanes;
    std::optional<std::uint64_t> seed;

    auto *run = app.add_subcommand("run", "Detect motion in every <category>/<sequence>/input under a dataset root");
    run->add_option("--dataset", dataset, "Dataset root")->required();
    run->add_option("--out", out_dir, "Output directory for masks and reports (default: results)");
    run->add_option("--config", config_file, "key=value configuration file");
    run->add_option("--kernel", kernel, "SNN kernel: v1 (all neurons) or v2 (skip zero inputs)")
        ->check(CLI::IsMember({"v1", "v2"}));
    run->add_option("--lanes", lanes, "Parallel lanes, a power of two (default 16)");
    run->add_option("--seed", seed, "Seed for the background model");
    run->add_flag("--bench", cfg.bench, "Evaluate against ground truth and write metrics/ranks CSVs");
    run->add_option("--method", cfg.method, "Method name written into metric reports");
    run->add_option("--set", overrides, "Override a config key, e.g. --set snn.steps=12");

    std::vector<std::string> rank_inputs;
    std::string rank_out = "ranks.csv";
    auto *rank = app.add_subcommand("rank", "Rank methods from metrics.csv files of several runs");
    rank->add_option("inputs", rank_inputs, "metrics.csv files or run directories ([name=]path)")
        ->required();
    rank->add_option("--out", rank_out, "Output ranks CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*rank)
            return hsmd::rank_results(rank_inputs, rank_out);

        // Precedence: config file, then --set, then dedicated flags.
        if (!config_file.empty())
            hsmd::load_config_file(cfg, config_file);
        for (const auto &kv : overrides)
            hsmd::apply_assignment(cfg, kv);
        if (!kernel.empty())
            cfg.kernel = hsmd::snn::parse_kernel(kernel);
        if (lanes)
            cfg.lanes = *lanes;
        if (seed)
            cfg.seed = cfg.dbs.seed = *seed;
        if (!out_dir.empty())
            cfg.out_dir = out_dir;
        cfg.validate();
        return hsmd::run(cfg, dataset);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
