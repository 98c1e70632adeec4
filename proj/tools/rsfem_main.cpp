// Command-line driver for the convergence studies.

#include "rsfem/errors.hpp"
#include "rsfem/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

int main(int argc, char** argv)
{
    CLI::App app{"Finite element / convolution quadrature solver for the fractional Rayleigh-Stokes problem"};
    app.set_version_flag("--version", "rsfem 0.1.0");

    std::optional<std::string> config_path;
    app.add_option("--config", config_path, "key=value file; command-line flags override it");

    // Every study flag is kept as text and applied through the same parser
    // as the config file, in the order given.
    const std::vector<std::pair<std::string, std::string>> flags = {
        {"example", "a|b|c|d"},
        {"scheme", "be|sbd"},
        {"alpha", "comma-separated list in (0,1)"},
        {"gamma", "positive real"},
        {"k", "mesh exponents, K = 2^k (list or a..b)"},
        {"K", "subdivision counts (list), overrides --k"},
        {"N", "step counts (list); tau = t/N"},
        {"t", "observation times (list)"},
        {"projection", "l2|ritz"},
        {"study", "temporal|spatial|blowup"},
        {"include-history-origin", "true|false"},
        {"reference", "auto|exact|time_discrete|fine_step"},
        {"out", "output path (default: stdout)"},
        {"format", "csv|text"},
    };
    std::vector<std::optional<std::string>> values(flags.size());
    for (std::size_t i = 0; i < flags.size(); ++i) {
        app.add_option("--" + flags[i].first, values[i], flags[i].second);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        rsfem::ExperimentConfig cfg;
        if (config_path) {
            rsfem::apply_config_file(cfg, *config_path);
        }
        for (std::size_t i = 0; i < flags.size(); ++i) {
            if (values[i]) {
                rsfem::apply_setting(cfg, flags[i].first, *values[i]);
            }
        }
        const rsfem::ErrorReport report = rsfem::run_experiment(cfg);
        const rsfem::ReportFormat fmt = rsfem::parse_format(cfg.format);
        if (cfg.out.empty()) {
            rsfem::emit_report(report, fmt, std::cout);
        } else {
            rsfem::emit_report(report, fmt, cfg.out);
        }
        return 0;
    } catch (const rsfem::Error& e) {
        std::cerr << "rsfem: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "rsfem: unexpected failure: " << e.what() << '\n';
        return 3;
    }
}
