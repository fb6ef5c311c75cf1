#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "degenlab/scenario.hpp"

namespace {

degen::ScenarioConfig load_with_overrides(const std::string& config_path, long seed_override) {
    degen::ScenarioConfig cfg = degen::load_scenario(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"degenlab: simulate u_t = lap F(u) on model geometries and audit "
                 "localized gradient estimates"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = "out";
    long seed = -1;
    int jobs = 1;
    app.add_option("--config", config_path, "scenario file (json)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed override");
    app.add_option("--jobs", jobs, "worker pool size for multi-window verifies")
        ->check(CLI::PositiveNumber);

    CLI::App* cmd_check = app.add_subcommand("check", "admissibility conditions and parameter ranges");
    CLI::App* cmd_lemma = app.add_subcommand("lemma", "symmetric-matrix supremum bound with brute-force audit");
    CLI::App* cmd_solve = app.add_subcommand("solve", "run the implicit solver and export the trajectory");
    CLI::App* cmd_verify = app.add_subcommand("verify", "bound ratios and differential-inequality residuals");
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Liouville double-cube sweep");

    double lemma_a = 1.0, lemma_b = 1.0;
    int lemma_n = 3;
    long lemma_samples = 100000;
    cmd_lemma->add_option("--a", lemma_a, "coefficient of A");
    cmd_lemma->add_option("--b", lemma_b, "coefficient of tr(A) I");
    cmd_lemma->add_option("--n", lemma_n, "matrix size")->check(CLI::Range(2, 8));
    cmd_lemma->add_option("--samples", lemma_samples, "random (A, v) draws")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        degen::RunOutcome outcome;
        if (cmd_lemma->parsed()) {
            outcome = degen::run_lemma(lemma_a, lemma_b, lemma_n, lemma_samples,
                                       seed >= 0 ? static_cast<std::uint64_t>(seed) : 1u, out_dir);
        } else {
            if (config_path.empty()) {
                std::fprintf(stderr, "error: --config is required for this subcommand\n");
                return 1;
            }
            const degen::ScenarioConfig cfg = load_with_overrides(config_path, seed);
            if (cmd_check->parsed())
                outcome = degen::run_check(cfg, out_dir);
            else if (cmd_solve->parsed())
                outcome = degen::run_solve(cfg, out_dir);
            else if (cmd_verify->parsed())
                outcome = degen::run_verify(cfg, out_dir, jobs);
            else if (cmd_sweep->parsed())
                outcome = degen::run_sweep(cfg, out_dir);
        }
        std::fputs(outcome.summary.c_str(), stdout);
        return outcome.exit_code;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
}
