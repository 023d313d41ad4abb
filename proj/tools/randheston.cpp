// randheston: CSV experiment runner for the randomised Heston engines.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "randheston/cli.hpp"
#include "randheston/config.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kEngineError = 3;

struct Options {
    std::string config;
    std::string out;
    std::string engines;
    std::string grid;
    std::optional<int> order;
    std::optional<double> v0;
};

randheston::Config prepare(const Options& opt) {
    randheston::Config cfg = randheston::load_config(opt.config);
    if (!opt.grid.empty()) randheston::apply_grid_override(cfg, opt.grid);
    if (!opt.engines.empty()) cfg.engines = randheston::split_list(opt.engines);
    if (opt.order) {
        if (*opt.order < 1 || *opt.order > 3) throw randheston::ConfigError("--order must be 1, 2 or 3");
        cfg.order = *opt.order;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Implied volatility tables for the Heston model with a randomised initial variance"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "Configuration file")->required();
        sub->add_option("--out", opt.out, "Output file (default stdout)");
        sub->add_option("--engines", opt.engines, "Comma separated engine list");
        sub->add_option("--order", opt.order, "Asymptotic order (1-3)");
        sub->add_option("--grid", opt.grid, "tmin:tmax:n,xmin:xmax:n");
    };
    auto* smile = app.add_subcommand("smile", "Exact and asymptotic smiles");
    auto* surface = app.add_subcommand("surface", "FFT implied volatility surface");
    auto* forward = app.add_subcommand("forward", "Forward smiles after grid.elapsed; the t grid holds tau");
    auto* largetime = app.add_subcommand("largetime", "Large-maturity limit smile");
    auto* calibrate = app.add_subcommand("calibrate", "Match E[sqrt V] to a spot variance");
    for (auto* sub : {smile, surface, forward, largetime, calibrate}) add_common(sub);
    calibrate->add_option("--v0", opt.v0, "Spot variance (default randomiser.v0_target or 0.06)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        const randheston::Config cfg = prepare(opt);
        std::string csv;
        if (*smile) csv = randheston::cmd_smile(cfg);
        else if (*surface) csv = randheston::cmd_surface(cfg);
        else if (*forward) csv = randheston::cmd_forward(cfg);
        else if (*largetime) csv = randheston::cmd_largetime(cfg);
        else csv = randheston::cmd_calibrate(cfg, opt.v0);

        if (opt.out.empty()) {
            std::cout << csv;
        } else {
            std::ofstream out(opt.out, std::ios::binary);
            if (!out) throw randheston::ConfigError("cannot write '" + opt.out + "'");
            out << csv;
        }
    } catch (const randheston::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const randheston::EngineFailure& e) {
        std::cerr << e.what() << '\n';
        return kEngineError;
    } catch (const randheston::Error& e) {
        std::cerr << e.what() << '\n';
        return kEngineError;
    }
    return 0;
}
