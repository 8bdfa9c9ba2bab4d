#include "rpmcf/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Uplink simulator for RIS-assisted cell-free massive MIMO with reflection pattern modulation"};
    std::string config_path, experiment, output, combiner, fading;
    std::uint64_t seed = 0;
    long trials = 0;
    int k = 0;
    app.add_option("--config", config_path, "Sectioned key = value config file");
    app.add_option("--experiment", experiment,
                   "se-cdf | se-vs-m | se-vs-u | se-vs-j | ee-vs-m | ee-vs-u | ee-vs-rho | optimize | "
                   "oracle-suite | timing");
    auto* seed_opt = app.add_option("--seed", seed, "Master seed");
    auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo channel trials per geometry");
    app.add_option("--output", output, "CSV output path (stdout when omitted)");
    app.add_option("--combiner", combiner, "mr | lmmse");
    auto* k_opt = app.add_option("--k", k, "Active blocks K; restricts the sweep to this value");
    app.add_option("--fading", fading, "rayleigh | rician | pure-los");
    CLI11_PARSE(app, argc, argv);

    try {
        rpmcf::ExperimentConfig cfg = config_path.empty() ? rpmcf::ExperimentConfig{} : rpmcf::load_config(config_path);
        if (!experiment.empty()) rpmcf::set_config_value(cfg, "experiment", "kind", experiment);
        if (*seed_opt) cfg.seed = seed;
        if (*trials_opt) cfg.trials = trials;
        if (!output.empty()) cfg.output = output;
        if (!combiner.empty()) cfg.combiner = rpmcf::parse_combiner(combiner);
        if (*k_opt) {
            cfg.sys.K = k;
            cfg.k_values = {k};
        }
        if (!fading.empty()) cfg.sys.fading = rpmcf::parse_fading(fading);

        const rpmcf::Table t = rpmcf::run_experiment(cfg);
        if (cfg.output.empty()) {
            rpmcf::write_csv(t, std::cout);
        } else {
            std::ofstream out(cfg.output, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open output file: " + cfg.output);
            rpmcf::write_csv(t, out);
            if (!out) throw std::runtime_error("write failed: " + cfg.output);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
