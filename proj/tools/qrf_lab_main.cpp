// qrf-lab: build relational states over finite groups and check the
// entropy/coherence identities they satisfy.
//
// Exit codes: 0 all checks passed, 2 at least one check failed,
// 1 configuration or runtime error.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "qrf/config.hpp"
#include "qrf/errors.hpp"
#include "qrf/version.hpp"

namespace {

std::pair<bool, bool> parse_format(const std::string& format) {
    bool json = false, csv = false;
    std::istringstream in(format);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token == "json")
            json = true;
        else if (token == "csv")
            csv = true;
        else if (!token.empty())
            throw qrf::ConfigError("unknown output format \"" + token +
                                   "\" (known: json, csv)");
    }
    if (!json && !csv)
        throw qrf::ConfigError("--format needs at least one of json, csv");
    return {json, csv};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relational quantum reference frames over finite groups"};
    app.set_version_flag("--version", std::string("qrf-lab ") + qrf::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::string format = "json";
    int trials = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;

    CLI::App* run = app.add_subcommand("run", "Run the checks of a config file or preset");
    CLI::Option* config_opt =
        run->add_option("config", config_path, "Path to a JSON experiment config");
    CLI::Option* preset_opt =
        run->add_option("--preset", preset, "Use a built-in preset instead of a config file");
    config_opt->excludes(preset_opt);
    preset_opt->excludes(config_opt);
    CLI::Option* trials_opt =
        run->add_option("--trials", trials, "Override the number of sampled states");
    CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the master RNG seed");
    CLI::Option* tol_opt = run->add_option("--tol", tol, "Override the residual tolerance");
    run->add_option("--out", out_dir, "Directory for report.json and CSVs")
        ->capture_default_str();
    run->add_option("--format", format, "Comma-separated outputs to write: json,csv")
        ->capture_default_str();

    CLI::App* presets_cmd = app.add_subcommand("presets", "List the built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (presets_cmd->parsed()) {
            for (const auto& name : qrf::preset_names())
                std::cout << name << "\n    " << qrf::preset_description(name) << "\n";
            return 0;
        }

        qrf::ExperimentSpec spec;
        if (preset_opt->count())
            spec = qrf::preset_spec(preset);
        else if (config_opt->count())
            spec = qrf::load_config(config_path);
        else
            throw qrf::ConfigError("run needs a config path or --preset NAME");

        qrf::RunOptions opts;
        if (trials_opt->count()) opts.trials = trials;
        if (seed_opt->count()) opts.seed = seed;
        if (tol_opt->count()) opts.tolerance = tol;
        opts.out_dir = out_dir;
        std::tie(opts.write_json, opts.write_csv) = parse_format(format);

        return qrf::run_experiment(std::move(spec), opts, std::cout);
    } catch (const qrf::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
