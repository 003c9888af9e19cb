#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relq/harness.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::vector<std::string> datasets;
    std::string seed, out, reps, sizes, betas, data_dir, threads;
};

void add_common(CLI::App* cmd, Overrides& o, bool shift_flags) {
    cmd->add_option("--config", o.config_path, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--dataset", o.datasets, "dataset id (repeatable); default: every available one");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--data-dir", o.data_dir, "dataset registry directory");
    cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
    if (shift_flags) {
        cmd->add_option("--reps", o.reps, "repetitions per cell");
        cmd->add_option("--sizes", o.sizes, "training sizes, comma separated (0 = full training set)");
        cmd->add_option("--betas", o.betas, "corruption rates, comma separated");
    }
}

relq::ExperimentConfig build_config(const Overrides& o) {
    relq::ExperimentConfig config;
    if (!o.config_path.empty()) {
        config.apply(relq::read_key_values(o.config_path));
    }
    relq::KeyValues kv;
    if (!o.datasets.empty()) {
        std::string joined;
        for (const auto& d : o.datasets) {
            joined += (joined.empty() ? "" : ",") + d;
        }
        kv["datasets"] = joined;
    }
    const std::pair<const char*, const std::string*> flags[] = {
        {"seed", &o.seed},   {"out", &o.out},         {"reps", &o.reps},        {"sizes", &o.sizes},
        {"betas", &o.betas}, {"data_dir", &o.data_dir}, {"threads", &o.threads},
    };
    for (const auto& [key, value] : flags) {
        if (!value->empty()) {
            kv[key] = *value;
        }
    }
    config.apply(kv);
    config.validate();
    return config;
}

int run(relq::ExperimentReport (*runner)(const relq::ExperimentConfig&), const Overrides& o) {
    const auto config = build_config(o);
    const auto report = runner(config);
    relq::write_report(report, config, config.out_dir);
    for (const auto& w : report.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    for (const auto& f : report.failures) {
        std::cerr << "failed: " << f.dataset << ": " << f.message << "\n";
    }
    std::cout << report.cells.size() << " cell(s) written to " << config.out_dir.string() << " in "
              << report.seconds << " s\n";
    return report.failures.empty() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability of individual naive Bayes predictions: uncertainty and robustness benchmarks"};
    app.set_version_flag("--version", relq::kVersion);
    app.require_subcommand(1);

    Overrides standard, shift, hybrid;
    auto* cmd_standard = app.add_subcommand("standard", "full training set, all measures");
    add_common(cmd_standard, standard, false);
    auto* cmd_shift = app.add_subcommand("shift", "limited and corrupted training data");
    add_common(cmd_shift, shift, true);
    auto* cmd_hybrid = app.add_subcommand("hybrid", "uncertainty and robustness combined by rank");
    add_common(cmd_hybrid, hybrid, false);

    std::string list_dir = "data";
    auto* cmd_datasets = app.add_subcommand("datasets", "list the dataset registry");
    cmd_datasets->add_option("--data-dir", list_dir, "dataset registry directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_standard) {
            return run(relq::run_standard, standard);
        }
        if (*cmd_shift) {
            return run(relq::run_shift, shift);
        }
        if (*cmd_hybrid) {
            return run(relq::run_hybrid, hybrid);
        }
        for (const auto& e : relq::list_registry(list_dir)) {
            std::cout << e.id << "\t" << (e.available ? "available" : "missing") << "\t" << e.descriptor.file.string()
                      << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
