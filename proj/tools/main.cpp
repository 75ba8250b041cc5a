#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

#include "icalab/cli.hpp"
#include "icalab/errors.hpp"

namespace {

void add_common(CLI::App* cmd, icalab::CliCommon& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--seed", opts.seed, "Master seed override");
    cmd->add_option("--jobs", opts.jobs, "Worker threads");
    cmd->add_option("--preset", opts.preset, "Training preset override");
    cmd->add_flag("--desk-scale", opts.desk_scale, "Cap budgets to desk scale");
    cmd->add_flag("--overwrite", opts.overwrite, "Allow reuse of a non-empty output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-sample nonlinear ICA laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", icalab::kToolVersion);

    icalab::CliCommon gen_opts;
    CLI::App* gen = app.add_subcommand("generate", "Generate a synthetic dataset");
    add_common(gen, gen_opts);

    icalab::CliCommon exp_opts;
    std::string exp_name;
    CLI::App* exp = app.add_subcommand("experiment", "Run a scaling experiment");
    exp->add_option("name", exp_name,
                    "precision | dimension | diversity | sgd | diagnostics | calibrate")
        ->required();
    add_common(exp, exp_opts);

    bool fault = false;
    CLI::App* verify = app.add_subcommand("verify", "Run the built-in oracle checks");
    verify->add_flag("--inject-gradient-fault", fault, "Corrupt one gradient (self-test)")
        ->group("");

    std::size_t plan_d = 10;
    double plan_delta = 1.0, plan_eps = 0.10;
    CLI::App* plan = app.add_subcommand("plan", "Sample size needed for a target error");
    plan->add_option("--d", plan_d, "Latent dimension")->required();
    plan->add_option("--delta", plan_delta, "Diversity")->required();
    plan->add_option("--eps", plan_eps, "Target identification error");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return icalab::cmd_generate(gen_opts);
        if (exp->parsed()) return icalab::cmd_experiment(exp_name, exp_opts);
        if (verify->parsed()) return icalab::cmd_verify(fault);
        if (plan->parsed()) return icalab::cmd_plan(plan_d, plan_delta, plan_eps);
    } catch (const icalab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
