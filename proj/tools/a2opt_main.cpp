#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "a2opt/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    int64_t seed = -1;
    int repeats = -1;
    std::vector<std::string> policies;
    std::vector<std::string> variants;
    int freeze_after_day = -1;
};

a2opt::ExperimentConfig build_config(const CommonOpts& o) {
    a2opt::ExperimentConfig cfg;
    if (!o.config_path.empty())
        cfg = a2opt::ExperimentConfig::from_key_values(a2opt::KeyValues::load(o.config_path));
    if (o.seed >= 0) cfg.seed = static_cast<uint64_t>(o.seed);
    if (o.repeats >= 0) cfg.repeats = o.repeats;
    if (!o.policies.empty()) {
        cfg.policies.clear();
        for (const std::string& name : o.policies) cfg.policies.push_back(a2opt::parse_policy(name));
    }
    if (!o.variants.empty()) {
        cfg.mse_variants.clear();
        for (const std::string& name : o.variants) cfg.mse_variants.push_back(a2opt::parse_variant(name));
    }
    if (o.freeze_after_day >= 0) cfg.freeze_after_day = o.freeze_after_day;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_arms) {
    cmd->add_option("--config", o.config_path, "key = value configuration file");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "override the master seed");
    if (with_arms) {
        cmd->add_option("--repeats", o.repeats, "override the repeat count");
        cmd->add_option("--policy", o.policies, "arms to run, in order (repeatable)");
        cmd->add_option("--freeze-after-day", o.freeze_after_day, "stop retraining after this day (0: never)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-loop coverage threshold optimization"};
    app.require_subcommand(1);

    CommonOpts gen_opts, opt_opts, mse_opts;
    std::string report_dir;

    CLI::App* gen = app.add_subcommand("generate", "write a synthetic dataset as cells.csv and handover.csv");
    add_common(gen, gen_opts, false);
    int gen_days = -1;
    gen->add_option("--days", gen_days, "override the day count");

    CLI::App* opt = app.add_subcommand("optimize", "run the closed-loop comparison and write a report");
    add_common(opt, opt_opts, true);

    CLI::App* mse = app.add_subcommand("mse-eval", "run the forward-chaining accuracy protocol");
    add_common(mse, mse_opts, false);
    mse->add_option("--variant", mse_opts.variants, "model variants to compare (repeatable)");

    CLI::App* rep = app.add_subcommand("report", "re-render the summary of an existing report directory");
    rep->add_option("--dir", report_dir, "report directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            a2opt::ExperimentConfig cfg = build_config(gen_opts);
            a2opt::SyntheticNetworkConfig scfg = cfg.synth;
            scfg.days = gen_days >= 0 ? gen_days : cfg.days;
            scfg.seed = cfg.seed;
            a2opt::SyntheticData data = a2opt::generate_synthetic(scfg);
            std::filesystem::create_directories(gen_opts.out_dir);
            a2opt::save_cells_csv(gen_opts.out_dir + "/cells.csv", data.records);
            a2opt::save_handover_csv(gen_opts.out_dir + "/handover.csv", data.handover);
            std::cout << "wrote " << data.records.size() << " records for " << data.cell_ids.size()
                      << " cells to " << gen_opts.out_dir << "\n";
        } else if (opt->parsed()) {
            a2opt::MetricsReport report = a2opt::run_closed_loop(build_config(opt_opts));
            a2opt::emit_report(report, opt_opts.out_dir);
            std::cout << a2opt::render_summary(report);
        } else if (mse->parsed()) {
            a2opt::MetricsReport report = a2opt::run_mse_eval(build_config(mse_opts));
            a2opt::emit_report(report, mse_opts.out_dir);
            std::cout << a2opt::render_summary(report);
        } else if (rep->parsed()) {
            std::cout << a2opt::render_summary(a2opt::load_report(report_dir));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
