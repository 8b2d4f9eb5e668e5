// Command-line driver: run / presets / validate / steady / selftest.
// Exit codes: 0 success, 1 validation or assertion failure, 2 usage error,
// 3 runtime blow-up or IO failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "elreg/run.hpp"
#include "elreg/selftest.hpp"

namespace {

int cmd_run(const std::string& config_path, bool quiet) {
    elreg::SimConfig cfg = elreg::load_config_file(config_path);
    elreg::RunResult res = elreg::run_simulation(cfg);
    const auto& last = res.records.back();
    if (!quiet) {
        std::printf("steps recorded: %zu  final t = %.6g\n", res.records.size(), last.t);
        std::printf("E_Q = %.12g  (kinetic %.6g, elastic %.6g, potential %.6g)\n", last.e_total,
                    last.kinetic, last.elastic, last.potential);
        std::printf("||u||_{-theta2} = %.6g  max|d| = %.6g\n", last.norm_u_m_theta2,
                    last.max_abs_d);
        if (!cfg.output.csv_path.empty())
            std::printf("records written to %s\n", cfg.output.csv_path.c_str());
        if (!res.snapshot_paths.empty())
            std::printf("%zu snapshots under %s\n", res.snapshot_paths.size(),
                        cfg.output.snapshot_dir.c_str());
    }
    return 0;
}

int cmd_presets() {
    std::printf("%-16s %6s %7s %7s %4s %s\n", "model", "theta", "theta1", "theta2", "chi", "B0");
    for (const auto& name : elreg::preset_names()) {
        elreg::ModelParams p = elreg::preset(name);
        std::printf("%-16s %6g %7g %7g %4d %s%s\n", name.c_str(), p.theta, p.theta1, p.theta2,
                    p.chi, p.chi == 0 ? "B00" : "B01",
                    p.nsv_a0 ? "   (A0 = -mu4 Lap (I - a^2 Lap)^-1)" : "");
    }
    return 0;
}

int cmd_validate(const std::string& config_path) {
    // parse_config rejects invalid coefficient sets; re-run the validator to
    // print the full per-constraint report for valid ones
    elreg::SimConfig cfg = elreg::load_config_file(config_path);
    elreg::ValidationReport rep = elreg::validate_constraints(cfg.leslie);
    std::printf("lambda1 = %.17g, lambda2 = %.17g, case %d\n", cfg.leslie.lambda1(),
                cfg.leslie.lambda2(), cfg.leslie.case_selector == elreg::CaseSelector::case1 ? 1 : 2);
    std::fputs(rep.describe().c_str(), stdout);
    std::printf(rep.passed ? "validation passed\n" : "validation FAILED\n");
    return rep.passed ? 0 : 1;
}

int cmd_steady(const std::string& config_path) {
    elreg::SimConfig cfg = elreg::load_config_file(config_path);
    elreg::GridPtr grid = cfg.make_grid_ptr();
    elreg::SpectralField d0 = elreg::build_director(cfg.director_init, grid);
    elreg::SteadyResult res = elreg::steady_state_solve(d0, 1e-8, 10000);
    std::printf("steady solve: %s after %d iterations, residual %.6e\n",
                res.converged ? "converged" : "NOT converged", res.iterations, res.residual);
    if (res.converged && !cfg.output.snapshot_dir.empty()) {
        std::filesystem::create_directories(cfg.output.snapshot_dir);
        elreg::SimState s{elreg::SpectralField(grid, elreg::Rank::vector), res.d_star, 0.0};
        std::string path = cfg.output.snapshot_dir + "/steady_state.bin";
        elreg::write_snapshot(s, path);
        std::printf("steady state written to %s\n", path.c_str());
    }
    return res.converged ? 0 : 1;
}

int cmd_selftest() {
    std::string tmpdir = std::filesystem::temp_directory_path() / "elreg-selftest";
    std::filesystem::create_directories(tmpdir);
    bool ok = elreg::selftest::run_all(std::cout, tmpdir);
    std::printf(ok ? "selftest passed\n" : "selftest FAILED\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral simulator for regularized Ericksen-Leslie systems"};
    app.require_subcommand(1);

    std::string config_path;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "integrate the configured system");
    run->add_option("--config", config_path, "config file (JSON)")->required();
    run->add_flag("--quiet", quiet, "suppress the summary");

    auto* presets = app.add_subcommand("presets", "print the six model presets");

    auto* validate = app.add_subcommand("validate", "check the coefficient constraints");
    validate->add_option("--config", config_path, "config file (JSON)")->required();

    auto* steady = app.add_subcommand("steady", "run the steady-state gradient flow");
    steady->add_option("--config", config_path, "config file (JSON)")->required();

    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(run)) return cmd_run(config_path, quiet);
        if (app.got_subcommand(presets)) return cmd_presets();
        if (app.got_subcommand(validate)) return cmd_validate(config_path);
        if (app.got_subcommand(steady)) return cmd_steady(config_path);
        if (app.got_subcommand(selftest)) return cmd_selftest();
    } catch (const elreg::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const elreg::BlowupError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const elreg::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
