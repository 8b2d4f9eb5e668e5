// Acceptance suite: one pass/fail line per criterion. Exit code 0 iff all
// criteria pass. Optional argv: criterion numbers to run (default all).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "elreg/run.hpp"
#include "elreg/selftest.hpp"

using namespace elreg;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, const char* what, bool ok, double seconds, const std::string& detail) {
    std::printf("%s criterion %2d: %s [%.1f s] %s\n", ok ? "PASS" : "FAIL", criterion, what,
                seconds, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string tmpdir() {
    static std::string dir = [] {
        auto d = std::filesystem::temp_directory_path() / "elreg-acceptance";
        std::filesystem::create_directories(d);
        return d.string();
    }();
    return dir;
}

LeslieCoefficients case1_parodi() {
    LeslieCoefficients l;
    l.mu1 = 0.2;
    l.mu2 = -0.5;
    l.mu3 = 0.0;  // lambda1 = -0.5
    l.mu5 = 1.0;
    l.mu6 = 0.5;  // lambda2 = 0.5, Parodi: mu2+mu3 = mu6-mu5
    l.case_selector = CaseSelector::case1;
    return l;
}

LeslieCoefficients case2_nonparodi() {
    LeslieCoefficients l;
    l.mu1 = 0.1;
    l.mu2 = -0.8;
    l.mu3 = 0.2;  // lambda1 = -1, mu2+mu3 = -0.6 (Parodi violated)
    l.mu5 = 1.2;
    l.mu6 = 0.7;  // lambda2 = 0.5; |1.1| < 2 sqrt(1.9) per noPa1
    l.case_selector = CaseSelector::case2;
    return l;
}

// Case 1 Parodi configuration on the unit torus, Taylor-Green velocity and
// a perturbed constant director
SimConfig energy_law_config(int n, double dt, double t_end) {
    SimConfig cfg;
    cfg.model_name = "SBM-EL";
    cfg.params = preset("SBM-EL");
    cfg.params.alpha = 1.0;
    cfg.params.mu4 = 1.0;
    cfg.leslie = case1_parodi();
    cfg.validation = validate_constraints(cfg.leslie);
    cfg.grid.dim = 2;
    cfg.grid.n_modes = n;
    cfg.velocity_init = {VelocityInit::Kind::taylor_green, 0.5, -2.0, 1};
    cfg.director_init.kind = DirectorInit::Kind::perturbed_constant;
    cfg.director_init.vec = {0.8, 0.2};
    cfg.director_init.amplitude = 0.2;
    cfg.director_init.seed = 5;
    cfg.time.dt = dt;
    cfg.time.t_end = t_end;
    cfg.time.record_every = 1;
    return cfg;
}

bool run_checks(int criterion, const char* what, const std::vector<selftest::CheckResult>& checks,
                double seconds) {
    bool all = true;
    std::ostringstream os;
    for (const auto& c : checks) {
        if (!c.passed) all = false;
        os << "\n        " << (c.passed ? "ok   " : "FAIL ") << c.name << " -- " << c.detail;
    }
    report(criterion, what, all, seconds, os.str());
    return all;
}

// ---- criteria -----------------------------------------------------------------

void criterion1() {
    Timer t;
    run_checks(1, "algebraic identity suite (N=32, 20 seeds, six presets)",
               selftest::algebraic_identity_suite(32, 20), t.seconds());
}

void criterion2() {
    Timer t;
    run_checks(2, "Ginzburg-Landau gradient check (eps-halving slope in [1.9,2.1])",
               selftest::gradient_check(32), t.seconds());
}

void criterion3() {
    Timer t;
    run_checks(3, "coercivity constants and sampled inequalities (100 fields)",
               selftest::coercivity_check(32, 100), t.seconds());
}

void criterion4() {
    Timer t;
    // Case 1 energy law at N = 64, T = 5, g = 0: per-step monotonicity and
    // first-order shrinkage of the budget residual under dt halving
    std::vector<double> dts = {2e-3, 1e-3, 5e-4};
    std::vector<double> mean_resid;
    bool monotone = true;
    double worst_inc = -1e300, worst_tol = 0.0;
    for (double dt : dts) {
        SimConfig cfg = energy_law_config(64, dt, 5.0);
        RunResult res = run_simulation(cfg);
        double acc = 0.0;
        for (std::size_t i = 1; i < res.records.size(); ++i) {
            double inc = res.records[i].e_total - res.records[i - 1].e_total;
            worst_inc = std::max(worst_inc, inc);
            if (inc > 100.0 * dt * dt) monotone = false;
            acc += res.records[i].budget_residual;
        }
        worst_tol = std::max(worst_tol, 100.0 * dt * dt);
        mean_resid.push_back(acc / double(res.records.size() - 1));
    }
    double r01 = mean_resid[0] / mean_resid[1];
    double r12 = mean_resid[1] / mean_resid[2];
    bool shrink = r01 >= 1.7 && r12 >= 1.7;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "worst per-step dE %.2e (tol %.1e); residual means %.3e/%.3e/%.3e, "
                  "ratios %.2f, %.2f (need >= 1.7)",
                  worst_inc, worst_tol, mean_resid[0], mean_resid[1], mean_resid[2], r01, r12);
    report(4, "Case 1 energy law, N=64, T=5, dt in {2e-3,1e-3,5e-4}",
           monotone && shrink, t.seconds(), buf);
}

void criterion5() {
    Timer t;
    // Case 2 inequality: one-sided residual bounded by K dt at every step
    const double dt = 2e-3;
    const double K = 25.0;
    SimConfig cfg = energy_law_config(64, dt, 5.0);
    cfg.model_name = "ML-EL-alpha";
    cfg.params = preset("ML-EL-alpha");
    cfg.params.alpha = 1.0;
    cfg.params.mu4 = 1.0;
    cfg.leslie = case2_nonparodi();
    cfg.validation = validate_constraints(cfg.leslie);
    bool valid = cfg.validation.passed;
    RunResult res = run_simulation(cfg);
    double worst = 0.0;
    for (std::size_t i = 1; i < res.records.size(); ++i)
        worst = std::max(worst, res.records[i].budget_residual);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "noPa1 valid %d; worst one-sided residual %.3e (tol %.1e)",
                  valid, worst, K * dt);
    report(5, "Case 2 energy inequality, non-Parodi coefficients, N=64, T=5",
           valid && worst <= K * dt, t.seconds(), buf);
}

void criterion6() {
    Timer t;
    // lambda2 = 0 run, ||d0||_inf = 0.9, T = 10: discrete maximum principle
    SimConfig cfg;
    cfg.model_name = "NSE-EL";
    cfg.params = preset("NSE-EL");
    cfg.leslie.mu1 = 0.0;
    cfg.leslie.mu2 = -0.5;
    cfg.leslie.mu3 = 0.5;  // lambda1 = -1
    cfg.leslie.mu5 = 0.5;
    cfg.leslie.mu6 = 0.5;  // lambda2 = 0, Parodi holds
    cfg.leslie.case_selector = CaseSelector::case1;
    cfg.validation = validate_constraints(cfg.leslie);
    cfg.grid.n_modes = 32;
    cfg.velocity_init = {VelocityInit::Kind::taylor_green, 0.3, -2.0, 1};
    cfg.director_init.kind = DirectorInit::Kind::random_unit;
    cfg.director_init.amplitude = 0.9;
    cfg.director_init.seed = 21;
    cfg.time.dt = 2e-3;
    cfg.time.t_end = 10.0;
    cfg.time.record_every = 10;
    RunResult res = run_simulation(cfg);
    double bound = res.records.front().max_abs_d;
    double worst = 0.0;
    for (const auto& r : res.records) worst = std::max(worst, r.max_abs_d);
    bool ok = worst <= bound * (1.0 + 1e-6);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "||d0||_inf %.9f, max over run %.9f, excess %.2e (tol 1e-6)",
                  bound, worst, worst / bound - 1.0);
    report(6, "maximum principle, lambda2=0, T=10", ok, t.seconds(), buf);
}

struct ConvergenceRun {
    RunResult res;
    SimConfig cfg;
    SteadyResult steady;
    ConvergenceReport rep;
};

ConvergenceRun convergence_run() {
    SimConfig cfg;
    cfg.model_name = "SBM-EL";  // theta + theta2 = 2 >= 1: strong mode
    cfg.params = preset("SBM-EL");
    cfg.params.alpha = 1.0;
    cfg.params.mu4 = 1.0;
    cfg.leslie = case1_parodi();
    cfg.leslie.mu1 = 0.1;
    cfg.validation = validate_constraints(cfg.leslie);
    cfg.grid.n_modes = 32;
    cfg.velocity_init = {VelocityInit::Kind::taylor_green, 0.2, -2.0, 1};
    cfg.director_init.kind = DirectorInit::Kind::perturbed_constant;
    cfg.director_init.vec = {0.9, 0.1};
    cfg.director_init.amplitude = 0.1;
    cfg.director_init.seed = 31;
    cfg.forcing.kind = ForcingKind::decaying;
    cfg.forcing.delta = 0.5;
    cfg.forcing.profile = {VelocityInit::Kind::taylor_green, 1e-5, -2.0, 1};
    cfg.time.dt = 2e-3;
    cfg.time.t_end = 100.0;
    cfg.time.record_every = 50;

    ConvergenceRun out;
    out.cfg = cfg;
    RunHooks hooks;
    hooks.keep_director_history = true;
    out.res = run_simulation(cfg, hooks);
    out.steady = steady_state_solve(out.res.final_state.d, 1e-10, 20000);
    ConvergenceOptions opts;
    opts.phi_tolerance = 1e-10;
    out.rep = convergence_monitor(out.res.records, out.res.director_history, out.steady.d_star,
                                  out.res.final_state.u, cfg.params, cfg.leslie,
                                  build_forcing(cfg.forcing, cfg.make_grid_ptr()), opts);
    return out;
}

void criterion7_8() {
    Timer t;
    ConvergenceRun run = convergence_run();
    double u0 = run.res.records.front().norm_u_m_theta2;
    double uT = run.res.records.back().norm_u_m_theta2;

    bool ok_u = uT <= 1e-6 * u0;
    bool ok_eq = run.rep.terminal_equilibrium_residual <= 1e-5;
    bool ok_phi = run.rep.phi_nonincreasing;
    bool ok_chi = run.rep.fit_ok && run.rep.chi_fit > 0.0;
    bool ok7 = run.steady.converged && ok_u && ok_eq && ok_phi && ok_chi;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "||u(T)||/||u(0)|| %.2e (tol 1e-6); eq residual %.2e (tol 1e-5); "
                  "Phi max increase %.2e; chi_fit %.3f",
                  uT / u0, run.rep.terminal_equilibrium_residual, run.rep.max_phi_increase,
                  run.rep.chi_fit);
    report(7, "convergence to equilibrium, decaying forcing, T=100", ok7, t.seconds(), buf);

    bool ok8 = run.rep.strong_mode && run.rep.terminal_d_dist_h1 <= 1e-4;
    char buf8[160];
    std::snprintf(buf8, sizeof(buf8), "strong mode %d; ||d(T)-d*||_1 = %.2e (tol 1e-4)",
                  run.rep.strong_mode, run.rep.terminal_d_dist_h1);
    report(8, "strong-mode convergence, theta+theta2 >= 1", ok8, 0.0, buf8);
}

void criterion9() {
    Timer t;
    GridPtr g = make_grid(2, 32);

    SpectralField d0 = perturbed_constant_director(g, {1.0, 0.0}, 1e-3, 77);
    SteadyResult res = steady_state_solve(d0, 1e-8, 10000);
    bool ok_solve = res.converged && res.residual < 1e-8 && res.iterations < 10000;

    // radial constant initial data against the 1D ODE dr/dtau = -(r^2-1) r
    SpectralField r0 = constant_director(g, {1.5, 0.0});
    double kmax2 = g->dim * std::pow(g->dealias_limit() * g->k_scale(), 2);
    double tau = 2.5 / (kmax2 + 8.0);
    const int iters = 300;
    SteadyResult flow = steady_state_solve(r0, 1e-30, iters);
    double r_flow = flow.d_star.at(0, g->index_of({0, 0, 0})).real();
    auto ode = [](double r) { return -(r * r - 1.0) * r; };
    double r = 1.5, h = tau / 100.0;
    for (int i = 0; i < iters * 100; ++i) {
        double k1 = ode(r), k2 = ode(r + 0.5 * h * k1), k3 = ode(r + 0.5 * h * k2),
               k4 = ode(r + h * k3);
        r += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    bool ok_ode = std::abs(r_flow - r) <= 1e-6;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "residual %.2e in %d iters; |r_flow - r_ode| = %.2e (tol 1e-6)", res.residual,
                  res.iterations, std::abs(r_flow - r));
    report(9, "steady-state gradient flow solver", ok_solve && ok_ode, t.seconds(), buf);
}

void criterion10() {
    Timer t;
    // continuous dependence: eps and eps/2 initial separations, ratio at T=1
    SimConfig cfg = energy_law_config(32, 1e-3, 1.0);
    GridPtr grid = cfg.make_grid_ptr();
    ForcingSpec none;

    SimState base;
    base.u = build_velocity(cfg.velocity_init, grid);
    base.u = dealias(leray_project(base.u));
    zero_mean_mode(base.u);
    base.d = dealias(build_director(cfg.director_init, grid));
    base.t = 0.0;

    SpectralField du = random_solenoidal_velocity(grid, 1.0, -1.0, 99);
    SpectralField dd = perturbed_constant_director(grid, {0.0, 0.0}, 1.0, 98);
    dd = dealias(dd);
    double norm0 = std::hypot(sobolev_norm(du, -cfg.params.theta2, NormConvention::velocity),
                              sobolev_norm(dd, 1.0, NormConvention::director));
    du *= 1.0 / norm0;
    dd *= 1.0 / norm0;

    auto evolve = [&](double eps) {
        SimState st = base;
        st.u.axpy(eps, du);
        st.d.axpy(eps, dd);
        TimeStepper stepper(TimeScheme::imex1, cfg.params, cfg.leslie, none, 1e6);
        long n = std::lround(cfg.time.t_end / cfg.time.dt);
        for (long i = 0; i < n; ++i) stepper.advance(st, cfg.time.dt, nullptr, false);
        return st;
    };
    auto dist = [&](const SimState& a, const SimState& b) {
        SpectralField eu = a.u - b.u;
        SpectralField ed = a.d - b.d;
        return std::hypot(sobolev_norm(eu, -cfg.params.theta2, NormConvention::velocity),
                          sobolev_norm(ed, 1.0, NormConvention::director));
    };
    SimState ref = evolve(0.0);
    const double eps = 1e-4;
    double d1 = dist(evolve(eps), ref);
    double d2 = dist(evolve(0.5 * eps), ref);
    double ratio = d1 / d2;
    bool ok = ratio >= 1.6 && ratio <= 2.4;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "separation ratio %.4f (want [1.6, 2.4]); dist(eps) %.3e",
                  ratio, d1);
    report(10, "continuous dependence probe, eps=1e-4, T=1", ok, t.seconds(), buf);
}

void criterion11() {
    Timer t;
    // determinism through the CLI: identical config+seed -> identical CSV
    SimConfig cfg = energy_law_config(32, 1e-3, 0.05);
    cfg.velocity_init = {VelocityInit::Kind::random_solenoidal, 0.4, -1.5, 1234};
    cfg.director_init.kind = DirectorInit::Kind::random_unit;
    cfg.director_init.amplitude = 0.9;
    cfg.director_init.seed = 4321;
    cfg.extra_norms.push_back({'d', 1.0});

    auto run_to = [&](const std::string& csv) {
        cfg.output.csv_path = csv;
        std::string cfg_path = tmpdir() + "/det.json";
        std::ofstream f(cfg_path);
        f << emit_config(cfg);
        f.close();
        std::string cmd = std::string(ELREG_CLI_PATH) + " run --quiet --config " + cfg_path;
        return std::system(cmd.c_str());
    };
    int rc1 = run_to(tmpdir() + "/det_a.csv");
    int rc2 = run_to(tmpdir() + "/det_b.csv");
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    std::string a = slurp(tmpdir() + "/det_a.csv");
    std::string b = slurp(tmpdir() + "/det_b.csv");
    bool identical = !a.empty() && a == b && rc1 == 0 && rc2 == 0;

    std::string cmd = std::string(ELREG_CLI_PATH) + " selftest > " + tmpdir() + "/selftest.log 2>&1";
    int rc = std::system(cmd.c_str());
    bool selftest_ok = WEXITSTATUS(rc) == 0;

    char buf[160];
    std::snprintf(buf, sizeof(buf), "CSV bytes %zu, bitwise identical %d; selftest exit %d",
                  a.size(), identical, WEXITSTATUS(rc));
    report(11, "determinism (bitwise CSV) and CLI selftest", identical && selftest_ok, t.seconds(),
           buf);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> pick;
    for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
    auto want = [&](int c) { return pick.empty() || pick.count(c) > 0; };

    Timer total;
    if (want(1)) criterion1();
    if (want(2)) criterion2();
    if (want(3)) criterion3();
    if (want(4)) criterion4();
    if (want(5)) criterion5();
    if (want(6)) criterion6();
    if (want(7) || want(8)) criterion7_8();
    if (want(9)) criterion9();
    if (want(10)) criterion10();
    if (want(11)) criterion11();

    std::printf("%s (%d failure%s, %.1f s total)\n", g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                g_failures, g_failures == 1 ? "" : "s", total.seconds());
    return g_failures == 0 ? 0 : 1;
}
