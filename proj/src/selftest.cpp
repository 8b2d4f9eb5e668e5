#include "elreg/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "elreg/config.hpp"
#include "elreg/diagnostics.hpp"
#include "elreg/el_terms.hpp"

namespace elreg::selftest {

namespace {

CheckResult make_check(const std::string& name, bool ok, double worst, double tol) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst %.3e (tol %.1e)", worst, tol);
    return {name, ok, buf};
}

LeslieCoefficients sample_leslie() {
    LeslieCoefficients l;
    l.mu1 = 0.2;
    l.mu2 = -0.5;
    l.mu3 = 0.0;  // lambda1 = -0.5; mu2 + mu3 = mu6 - mu5 (Parodi)
    l.mu5 = 1.0;
    l.mu6 = 0.5;
    l.case_selector = CaseSelector::case1;
    return l;
}

}  // namespace

std::vector<CheckResult> algebraic_identity_suite(int n_modes, int seeds) {
    std::vector<CheckResult> out;
    GridPtr grid = make_grid(2, n_modes);
    LeslieCoefficients leslie = sample_leslie();

    double worst_idem = 0.0, worst_div = 0.0, worst_sum = 0.0;
    double worst_b0 = 0.0, worst_b1 = 0.0, worst_er = 0.0;

    for (int seed = 1; seed <= seeds; ++seed) {
        SpectralField u = random_solenoidal_velocity(grid, 0.8, -1.5, 1000 + seed);
        SpectralField raw = random_solenoidal_velocity(grid, 1.0, -1.0, 2000 + seed);
        SpectralField d =
            perturbed_constant_director(grid, {0.8, 0.3}, 0.4, 3000 + seed);
        SpectralField psi =
            perturbed_constant_director(grid, {0.1, -0.2}, 0.5, 4000 + seed);

        // Leray idempotence and divergence kill
        SpectralField p1 = leray_project(raw);
        SpectralField p2 = leray_project(p1);
        double scale = p1.max_abs_coeff();
        worst_idem = std::max(worst_idem, (p2 - p1).max_abs_coeff() / std::max(scale, 1e-300));
        worst_div = std::max(worst_div, divergence_residual(p1) / std::max(scale, 1e-300));

        for (const auto& name : preset_names()) {
            ModelParams params = preset(name);
            params.alpha = 0.7;
            params.mu4 = 1.3;

            // A_Q + omega_Q = grad(Qu)
            SpectralField v = apply_multiplier(u, params.q_spec());
            SpectralField sum = rate_of_strain(v) + vorticity_skew(v);
            SpectralField g = velocity_gradient(v);
            double gs = std::max(g.max_abs_coeff(), 1e-300);
            worst_sum = std::max(worst_sum, (sum - g).max_abs_coeff() / gs);

            // trilinear cancellations with the preset-native B0 selector
            SpectralField qu = apply_multiplier(u, params.q_spec());
            double n1 = 1.0 + sobolev_norm(u, 1.0, NormConvention::velocity);
            double b0 = trilinear_b0(u, u, qu, params);
            worst_b0 = std::max(worst_b0, std::abs(b0) / (n1 * n1 * n1));
            double npsi = 1.0 + sobolev_norm(psi, 1.0, NormConvention::director);
            double b1 = trilinear_b1(u, psi, psi, params);
            worst_b1 = std::max(worst_b1, std::abs(b1) / (n1 * npsi * npsi));
        }

        // Ericksen identity P[R0(A1 d, d)] = P[-div(grad d . grad d)]
        SpectralField f1 = leray_project(ericksen_force(d));
        SpectralField f2 = leray_project(ericksen_force_div_form(d));
        double es = std::max(f1.max_abs_coeff(), 1e-300);
        worst_er = std::max(worst_er, (f1 - f2).max_abs_coeff() / es);
    }

    out.push_back(make_check("leray idempotence (rel)", worst_idem <= 1e-13, worst_idem, 1e-13));
    out.push_back(make_check("leray divergence kill (rel)", worst_div <= 1e-13, worst_div, 1e-13));
    out.push_back(make_check("A_Q + omega_Q = grad v (rel)", worst_sum <= 1e-13, worst_sum, 1e-13));
    out.push_back(make_check("b0(u,u,Qu) cancellation, six presets", worst_b0 <= 1e-10,
                             worst_b0, 1e-10));
    out.push_back(make_check("b1(u,psi,psi) cancellation, six presets", worst_b1 <= 1e-10,
                             worst_b1, 1e-10));
    out.push_back(make_check("ericksen identity (rel)", worst_er <= 1e-10, worst_er, 1e-10));
    (void)leslie;
    return out;
}

std::vector<CheckResult> gradient_check(int n_modes) {
    std::vector<CheckResult> out;
    GridPtr grid = make_grid(2, n_modes);
    SpectralField d = perturbed_constant_director(grid, {0.6, -0.4}, 0.5, 17);
    SpectralField h = perturbed_constant_director(grid, {0.2, 0.3}, 0.7, 23);

    auto potential = [&](const SpectralField& field) {
        return ginzburg_landau_force(field).potential_integral;
    };
    SpectralField f = ginzburg_landau_force(d).force;
    // the dealiased force paired against a band-limited direction equals the
    // full Gateaux derivative
    double dir = inner_product(f, h);

    std::vector<double> eps = {1e-2, 5e-3, 2.5e-3};
    std::vector<double> err;
    for (double e : eps) {
        SpectralField dp = d; dp.axpy(e, h);
        SpectralField dm = d; dm.axpy(-e, h);
        double cd = (potential(dp) - potential(dm)) / (2.0 * e);
        err.push_back(std::abs(cd - dir));
    }
    double s1 = std::log(err[0] / err[1]) / std::log(2.0);
    double s2 = std::log(err[1] / err[2]) / std::log(2.0);
    bool ok = s1 >= 1.9 && s1 <= 2.1 && s2 >= 1.9 && s2 <= 2.1;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "halving slopes %.4f, %.4f (want [1.9,2.1])", s1, s2);
    out.push_back({"gradient consistency <f(d),h> vs central difference", ok, buf});

    // small-eps absolute bound, C covering the cubic W''' term of this data
    double worst = 0.0;
    for (double e : {1e-4, 1e-5}) {
        SpectralField dp = d; dp.axpy(e, h);
        SpectralField dm = d; dm.axpy(-e, h);
        double cd = (potential(dp) - potential(dm)) / (2.0 * e);
        worst = std::max(worst, std::abs(cd - dir) / (e * e));
    }
    double c_bound = 200.0;
    out.push_back(make_check("gradient error <= C eps^2", worst <= c_bound, worst, c_bound));
    return out;
}

std::vector<CheckResult> coercivity_check(int n_modes, int samples) {
    std::vector<CheckResult> out;
    GridPtr grid = make_grid(2, n_modes);

    double min_c = 1e300;
    double worst_slack = 0.0;
    for (std::size_t pi = 0; pi < preset_names().size(); ++pi) {
        ModelParams params = preset(preset_names()[pi]);
        params.alpha = 0.9;
        params.mu4 = 0.8;
        CoercivityConstants cc = coercivity_constants(params, *grid);
        min_c = std::min({min_c, cc.c_q, cc.c_a0q, cc.c_a0});

        for (int s = 0; s < samples; ++s) {
            SpectralField w = random_solenoidal_velocity(grid, 1.0, -1.0, 9000 + 100 * s + pi);
            SpectralField qw = apply_multiplier(w, params.q_spec());
            SpectralField a0w(w.grid_ptr(), Rank::vector);
            {
                const Grid& g = *grid;
                for (std::size_t m = 0; m < w.modes(); ++m) {
                    double sym = params.a0_symbol(g.k2(m));
                    for (int c = 0; c < g.dim; ++c) a0w.at(c, m) = sym * w.at(c, m);
                }
            }
            double lhs_q = inner_product(qw, w);
            double rhs_q = cc.c_q * std::pow(sobolev_norm(w, -params.theta2,
                                                          NormConvention::velocity), 2);
            double lhs_a = inner_product(a0w, qw);
            double rhs_a = cc.c_a0q * std::pow(sobolev_norm(w, params.theta - params.theta2,
                                                            NormConvention::velocity), 2);
            worst_slack = std::max(worst_slack, (rhs_q - lhs_q) / std::max(lhs_q, 1e-300));
            worst_slack = std::max(worst_slack, (rhs_a - lhs_a) / std::max(lhs_a, 1e-300));
        }
    }
    out.push_back(make_check("coercivity constants positive", min_c > 0.0, min_c, 0.0));
    out.push_back(make_check("sampled coercivity inequalities (rel slack)", worst_slack <= 1e-12,
                             worst_slack, 1e-12));
    return out;
}

std::vector<CheckResult> io_roundtrip_checks(const std::string& tmpdir) {
    std::vector<CheckResult> out;

    // config emit/parse identity
    {
        SimConfig cfg;
        cfg.model_name = "SBM-EL";
        cfg.params = preset("SBM-EL");
        cfg.params.alpha = 0.8;
        cfg.params.mu4 = 1.2;
        cfg.leslie = sample_leslie();
        cfg.validation = validate_constraints(cfg.leslie);
        cfg.grid.n_modes = 16;
        cfg.velocity_init.kind = VelocityInit::Kind::taylor_green;
        cfg.velocity_init.amplitude = 0.3;
        cfg.director_init.kind = DirectorInit::Kind::perturbed_constant;
        cfg.director_init.vec = {1.0, 0.0};
        cfg.director_init.amplitude = 0.05;
        cfg.director_init.seed = 7;
        cfg.extra_norms.push_back({'d', 1.0});
        std::string text = emit_config(cfg);
        SimConfig back = parse_config(text);
        bool same = emit_config(back) == text;
        out.push_back({"config parse(emit(cfg)) identity", same, same ? "bit-identical" : "differs"});
    }

    // CSV numeric round trip
    {
        std::vector<EnergyRecord> recs(3);
        Rng rng(5);
        for (auto& r : recs) {
            r.t = rng.uniform();
            r.e_total = rng.gaussian() * 1e3;
            r.kinetic = std::exp(10 * rng.gaussian());
            r.elastic = rng.gaussian();
            r.potential = rng.uniform() * 1e-7;
            r.diss_visc = rng.gaussian();
            r.diss_rho = rng.gaussian();
            r.diss_mu1 = rng.gaussian();
            r.diss_aqd = rng.gaussian();
            r.diss_nq = rng.gaussian();
            r.forcing_power = rng.gaussian();
            r.budget_residual = rng.uniform() * 1e-12;
            r.norm_u_m_theta2 = rng.uniform();
            r.norm_u_theta_m_theta2 = rng.uniform();
            r.max_abs_d = rng.uniform();
            r.extra_norms = {rng.gaussian()};
        }
        std::string path = tmpdir + "/selftest_records.csv";
        write_records_csv(recs, {{'d', 1.0}}, path);
        auto [back, names] = read_records_csv(path);
        bool ok = back.size() == recs.size() && names.size() == 1;
        double worst = 0.0;
        for (std::size_t i = 0; ok && i < recs.size(); ++i) {
            const double* a = &recs[i].t;
            const double* b = &back[i].t;
            for (int c = 0; c < 15; ++c)
                if (a[c] != b[c]) ok = false;
            if (recs[i].extra_norms[0] != back[i].extra_norms[0]) ok = false;
        }
        out.push_back(make_check("CSV bit-exact round trip", ok, worst, 0.0));
    }

    // snapshot round trip
    {
        GridPtr grid = make_grid(2, 16);
        SimState s;
        s.u = taylor_green_velocity(grid, 0.4);
        s.d = perturbed_constant_director(grid, {0.9, 0.1}, 0.1, 3);
        s.t = 0.625;
        std::string path = tmpdir + "/selftest_snapshot.bin";
        write_snapshot(s, path);
        SimState back = read_snapshot(path);
        double scale = std::max({s.u.max_abs_coeff(), s.d.max_abs_coeff(), 1e-300});
        double dev = std::max((back.u - s.u).max_abs_coeff(), (back.d - s.d).max_abs_coeff());
        bool ok = dev / scale <= 1e-12 && back.t == s.t;
        out.push_back(make_check("snapshot round trip (rel)", ok, dev / scale, 1e-12));
    }
    return out;
}

std::vector<CheckResult> dynamics_checks(int n_modes) {
    std::vector<CheckResult> out;
    GridPtr grid = make_grid(2, n_modes);
    LeslieCoefficients leslie = sample_leslie();
    ModelParams params = preset("SBM-EL");
    ForcingSpec none;

    // the global minimizer is a fixed point of the coupled step
    SimState rest{SpectralField(grid, Rank::vector), constant_director(grid, {0.0, 1.0}), 0.0};
    auto [next, rep] = step_imex(rest, 5e-3, params, leslie, none);
    double drift = std::max((next.u - rest.u).max_abs_coeff(), (next.d - rest.d).max_abs_coeff());
    out.push_back(make_check("imex fixed point at the equilibrium", drift <= 1e-14, drift, 1e-14));
    (void)rep;

    // measured IMEX order against the exact heat decay of one mode
    ModelParams nse = preset("NSE-EL");
    nse.mu4 = 0.8;
    const double T = 0.25;
    double exact = 0.5 * std::exp(-nse.mu4 * T);
    std::vector<double> errs;
    for (double dt : {1e-2, 5e-3}) {
        SpectralField u(grid, Rank::vector);
        u.at(0, grid->index_of({0, 1, 0})) = 0.5;
        u.at(0, grid->index_of({0, -1, 0})) = 0.5;
        SimState st{u, SpectralField(grid, Rank::vector), 0.0};
        long steps = std::lround(T / dt);
        for (long i = 0; i < steps; ++i) st = step_imex(st, dt, nse, leslie, none).first;
        errs.push_back(std::abs(st.u.at(0, grid->index_of({0, 1, 0})).real() - exact) / exact);
    }
    double order = std::log(errs[0] / errs[1]) / std::log(2.0);
    out.push_back(make_check("imex heat-decay order in [0.9, 1.1]",
                             order >= 0.9 && order <= 1.1, order, 1.1));

    // stationary budget residual vanishes
    EnergyRecord a = make_energy_record(rest, params, leslie, none);
    EnergyRecord b = a;
    b.t += 1e-2;
    double resid = energy_budget_residual(a, b, 1e-2, leslie);
    out.push_back(make_check("stationary budget residual", resid <= 1e-14, resid, 1e-14));

    // steady-state solver certificate
    SteadyResult steady =
        steady_state_solve(perturbed_constant_director(grid, {1.0, 0.0}, 1e-3, 7), 1e-9, 5000);
    out.push_back(make_check("steady-state solver residual", steady.converged && steady.residual <= 1e-9,
                             steady.residual, 1e-9));
    return out;
}

bool run_all(std::ostream& os, const std::string& tmpdir) {
    bool all = true;
    auto emit = [&](const std::vector<CheckResult>& checks) {
        for (const auto& c : checks) {
            os << (c.passed ? "PASS " : "FAIL ") << c.name << " -- " << c.detail << "\n";
            if (!c.passed) all = false;
        }
    };
    emit(algebraic_identity_suite(32, 5));
    emit(gradient_check(32));
    emit(coercivity_check(32, 25));
    emit(dynamics_checks(32));
    emit(io_roundtrip_checks(tmpdir));
    return all;
}

}  // namespace elreg::selftest
