#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "doilab/errors.hpp"
#include "doilab/experiments.hpp"

namespace {

constexpr int kViolation = 2;
constexpr int kConfigError = 3;

doilab::ExperimentResult dispatch(const std::string& name, const doilab::ExperimentConfig& cfg) {
    if (name == "truncation-growth") return doilab::run_truncation_growth(cfg);
    if (name == "commutator-ratios") return doilab::run_commutator_ratios(cfg);
    if (name == "p2q2-mixed") return doilab::run_p2q2_mixed(cfg);
    if (name == "psumming-check") return doilab::run_psumming_check(cfg);
    if (name == "doi-identity") return doilab::run_doi_identity(cfg);
    return doilab::run_all(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"doilab: double operator integral and Schur multiplier experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_path;
    for (const char* name :
         {"truncation-growth", "commutator-ratios", "p2q2-mixed", "psumming-check", "doi-identity", "all"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--out", out_path, "override the output CSV path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();

    doilab::ExperimentConfig cfg;
    try {
        cfg = doilab::load_config(config_path);
    } catch (const doilab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    if (sub->count("--seed") > 0) {
        cfg.seed = seed;
        cfg.search.seed = seed;
    }
    if (sub->count("--out") > 0) cfg.output_path = out_path;

    try {
        const doilab::ExperimentResult result = dispatch(name, cfg);
        doilab::write_csv(cfg.output_path, result.rows);
        std::ofstream summary(cfg.output_path + ".summary.json");
        summary << result.summary.dump(2) << '\n';
        std::cout << "wrote " << result.rows.size() << " rows to " << cfg.output_path << '\n';
        if (!result.violations.empty()) {
            std::cerr << result.violations.size() << " assertion violation(s)\n";
            for (const std::string& v : result.violations) std::cerr << v << '\n';
            return kViolation;
        }
    } catch (const doilab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
