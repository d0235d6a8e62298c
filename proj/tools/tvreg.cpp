// tvreg: simulate datasets, fit the three-step estimator, run Monte Carlo
// studies. See README.md and docs/config.md.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tvreg/cli.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<std::size_t> known_order;
    std::optional<std::string> out;
    std::string dataset;
};

tvreg::cli::RunConfig resolve(const Overrides& o) {
    tvreg::cli::RunConfig c = o.config.empty() ? tvreg::cli::RunConfig{} : tvreg::cli::load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.threads) c.threads = *o.threads;
    if (o.known_order) {
        if (*o.known_order == 0) throw tvreg::InvalidConfig("--known-order must be at least 1");
        c.pipeline.known_order = *o.known_order;
    }
    if (o.out) c.out_dir = *o.out;
    if (!o.dataset.empty()) c.dataset = o.dataset;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-varying nonparametric regression with tvAR errors"};
    app.require_subcommand(1);
    Overrides o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
    };

    auto* simulate = app.add_subcommand("simulate", "write simulated datasets and a manifest");
    common(simulate);
    simulate->add_option("--seed", o.seed, "base seed");

    auto* fit = app.add_subcommand("fit", "run the three-step procedure on a dataset");
    common(fit);
    fit->add_option("dataset", o.dataset, "dataset CSV (t,x,y)");
    fit->add_option("--known-order", o.known_order, "use an unpenalized tvAR(p) instead of ULASSO selection");

    auto* replicate = app.add_subcommand("replicate", "Monte Carlo study with aggregate tables");
    common(replicate);
    replicate->add_option("--seed", o.seed, "base seed");
    replicate->add_option("--threads", o.threads, "worker threads (0 = all cores)");

    auto* bandwidth = app.add_subcommand("bandwidth", "leave-one-out bandwidth scores for a dataset");
    common(bandwidth);
    bandwidth->add_option("dataset", o.dataset, "dataset CSV (t,x,y)");
    bandwidth->add_option("--known-order", o.known_order, "lag order for the h_e score");

    auto* moments = app.add_subcommand("moments", "print kernel moments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (moments->parsed()) {
            tvreg::cli::cmd_moments(std::cout);
            return 0;
        }
        const tvreg::cli::RunConfig config = resolve(o);
        if (simulate->parsed()) tvreg::cli::cmd_simulate(config, std::cout);
        else if (fit->parsed()) tvreg::cli::cmd_fit(config, std::cout);
        else if (replicate->parsed()) tvreg::cli::cmd_replicate(config, std::cout);
        else if (bandwidth->parsed()) tvreg::cli::cmd_bandwidth(config, std::cout);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tvreg::cli::exit_code(e);
    }
}
