// thermalab: reproducible random-matrix thermalization experiments.
//
// thermalab <spectrum|evolve|eth|report> --config PATH [--seed U64] [--out DIR]
//           [--jobs N] [--n-levels N] [--delta F] [--lambda F]
//
// Exit codes: 0 success, 2 config error, 3 numeric failure, 4 IO error.

#include "thermalab/config.hpp"
#include "thermalab/errors.hpp"
#include "thermalab/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace thermalab;

int main(int argc, char** argv) {
    CLI::App app{"random-matrix thermalization laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int jobs = -1;
    long long n_levels = -1;
    double delta = -1.0;
    double lambda = -1.0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "experiment config file");
        if (needs_config) c->required();
        sub->add_option("--seed", seed, "master seed override")
            ->each([&](const std::string&) { has_seed = true; });
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--jobs", jobs, "worker threads (0 = all cores)");
        sub->add_option("--n-levels", n_levels, "scaffold level count override");
        sub->add_option("--delta", delta, "correlation width override");
        sub->add_option("--lambda", lambda, "microscopic coupling override");
    };

    auto* sp = app.add_subcommand("spectrum", "spacing statistics against the GOE laws");
    add_common(sp, true);
    auto* ev = app.add_subcommand("evolve", "ensemble-mean Tr(A rho(t)) and its prediction");
    add_common(ev, true);
    auto* et = app.add_subcommand("eth", "matrix-element statistics of the rotated observable");
    add_common(et, true);
    auto* rp = app.add_subcommand("report", "assemble the SVG summary from prior outputs");
    add_common(rp, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (rp->parsed()) {
            std::string dir = out_dir;
            if (dir.empty() && !config_path.empty())
                dir = cli::load_config(config_path).output_dir;
            if (dir.empty()) dir = "out";
            cli::cmd_report(dir);
            std::cout << dir << "/report.svg\n";
            return 0;
        }

        cli::ExperimentConfig cfg = cli::load_config(config_path);
        cli::ConfigOverrides ov;
        ov.has_seed = has_seed;
        ov.seed = seed;
        ov.out_dir = out_dir;
        ov.jobs = jobs;
        ov.n_levels = n_levels;
        ov.delta = delta;
        ov.lambda = lambda;
        if (ov.jobs < 0) {
            if (const char* env = std::getenv("THERMALAB_JOBS")) ov.jobs = std::atoi(env);
        }
        cli::apply_overrides(cfg, ov);
        cli::validate(cfg);

        if (sp->parsed()) cli::cmd_spectrum(cfg);
        if (ev->parsed()) cli::cmd_evolve(cfg);
        if (et->parsed()) cli::cmd_eth(cfg);
        std::cout << cfg.output_dir << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
