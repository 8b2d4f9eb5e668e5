#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "elreg/diagnostics.hpp"

using namespace elreg;

namespace {

LeslieCoefficients parodi_leslie() {
    LeslieCoefficients l;
    l.mu1 = 0.2;
    l.mu2 = -0.5;
    l.mu3 = 0.0;
    l.mu5 = 1.0;
    l.mu6 = 0.5;
    l.case_selector = CaseSelector::case1;
    return l;
}

LeslieCoefficients case2_leslie() {
    LeslieCoefficients l;
    l.mu1 = 0.1;
    l.mu2 = -0.8;
    l.mu3 = 0.2;  // lambda1 = -1, mu2+mu3 = -0.6 (Parodi violated)
    l.mu5 = 1.2;
    l.mu6 = 0.7;  // lambda2 = 0.5
    l.case_selector = CaseSelector::case2;
    return l;
}

struct ShortRun {
    std::vector<EnergyRecord> records;
    SimState final_state;
};

ShortRun integrate(const GridPtr& g, const ModelParams& params, const LeslieCoefficients& leslie,
                   SimState st, double dt, double t_end) {
    ForcingSpec none;
    ShortRun out{{make_energy_record(st, params, leslie, none)}, st};
    long n = std::lround(t_end / dt);
    for (long i = 1; i <= n; ++i) {
        st = step_imex(st, dt, params, leslie, none).first;
        st.t = dt * i;
        EnergyRecord rec = make_energy_record(st, params, leslie, none);
        rec.budget_residual = energy_budget_residual(out.records.back(), rec, dt, leslie);
        out.records.push_back(rec);
    }
    out.final_state = st;
    return out;
}

}  // namespace

TEST_CASE("total energy: minimizer, pure potential, pure kinetic") {
    GridPtr g = make_grid(2, 16);
    LeslieCoefficients leslie = parodi_leslie();
    ModelParams params = preset("NSE-EL");  // Q = I

    SimState unit{SpectralField(g, Rank::vector), constant_director(g, {1.0, 0.0}), 0.0};
    EnergyRecord r1 = total_energy(unit, params, leslie);
    CHECK(r1.e_total <= 1e-14);

    SimState zero{SpectralField(g, Rank::vector), SpectralField(g, Rank::vector), 0.0};
    EnergyRecord r2 = total_energy(zero, params, leslie);
    CHECK(r2.e_total == doctest::Approx(0.25 * 4 * M_PI * M_PI).epsilon(1e-13));
    CHECK(r2.kinetic == 0.0);
    CHECK(r2.elastic == 0.0);

    SpectralField u(g, Rank::vector);
    u.at(0, g->index_of({0, 1, 0})) = 0.5;  // cos(y) e1
    u.at(0, g->index_of({0, -1, 0})) = 0.5;
    SimState flow{u, constant_director(g, {0.0, 1.0}), 0.0};
    EnergyRecord r3 = total_energy(flow, params, leslie);
    CHECK(r3.kinetic == doctest::Approx(M_PI * M_PI).epsilon(1e-13));
    CHECK(r3.e_total == doctest::Approx(M_PI * M_PI).epsilon(1e-12));

    // additivity is exact by construction
    CHECK(r3.e_total == r3.kinetic + r3.elastic + r3.potential);
}

TEST_CASE("dissipation components: zero state, signs, coercivity floor") {
    GridPtr g = make_grid(2, 24);
    LeslieCoefficients leslie = parodi_leslie();

    for (const auto& name : preset_names()) {
        ModelParams params = preset(name);
        params.alpha = 0.9;

        SimState rest{SpectralField(g, Rank::vector), constant_director(g, {0.0, 1.0}), 0.0};
        EnergyRecord r0 = dissipation_components(rest, params, leslie);
        CHECK(r0.diss_visc <= 1e-14);
        CHECK(r0.diss_rho <= 1e-14);
        CHECK(r0.diss_mu1 <= 1e-14);
        CHECK(r0.diss_aqd <= 1e-14);

        SimState st{random_solenoidal_velocity(g, 0.6, -1.5, 5),
                    perturbed_constant_director(g, {0.7, 0.2}, 0.4, 6), 0.0};
        EnergyRecord r = dissipation_components(st, params, leslie);
        CHECK(r.diss_visc >= 0.0);
        CHECK(r.diss_rho >= 0.0);
        CHECK(r.diss_mu1 >= 0.0);
        CHECK(r.diss_aqd >= 0.0);
        CHECK(r.diss_nq >= 0.0);

        CoercivityConstants cc = coercivity_constants(params, *g);
        double floor = cc.c_a0q * std::pow(sobolev_norm(st.u, params.theta - params.theta2,
                                                        NormConvention::velocity),
                                           2);
        CHECK(r.diss_visc >= floor * (1.0 - 1e-12));
    }

    // Case 1 with Parodi: the A_Qd coefficient in the energy law is >= 0
    LeslieCoefficients l = parodi_leslie();
    CHECK(l.mu5 + l.mu6 + l.lambda2() * l.lambda2() / l.lambda1() >= 0.0);
}

TEST_CASE("equilibrium residual: exact zeros and the constant stretch") {
    GridPtr g = make_grid(2, 16);
    CHECK(equilibrium_residual(constant_director(g, {0.6, 0.8})) <= 1e-14);
    CHECK(equilibrium_residual(SpectralField(g, Rank::vector)) == 0.0);

    SpectralField stretched = constant_director(g, {1.1, 0.0});
    // ||f|| = (1.1^2 - 1) * 1.1 * sqrt(L^2) = 0.231 * 2 pi
    CHECK(equilibrium_residual(stretched) ==
          doctest::Approx(0.231 * 2 * M_PI).epsilon(1e-12));
}

TEST_CASE("budget residual: stationary state gives zero, refinement shrinks it") {
    GridPtr g = make_grid(2, 32);
    LeslieCoefficients leslie = parodi_leslie();
    ModelParams params = preset("SBM-EL");

    // stationary equilibrium: consecutive identical records
    SimState rest{SpectralField(g, Rank::vector), constant_director(g, {1.0, 0.0}), 0.0};
    ForcingSpec none;
    EnergyRecord a = make_energy_record(rest, params, leslie, none);
    EnergyRecord b = a;
    b.t = a.t + 1e-2;
    CHECK(energy_budget_residual(a, b, 1e-2, leslie) <= 1e-14);

    // dt-refinement on a real trajectory: mean residual drops by >= 1.67x
    SimState st0{taylor_green_velocity(g, 0.5),
                 perturbed_constant_director(g, {0.8, 0.2}, 0.2, 3), 0.0};
    std::vector<double> mean_residuals;
    for (double dt : {4e-3, 2e-3}) {
        ShortRun run = integrate(g, params, leslie, st0, dt, 0.2);
        double acc = 0.0;
        for (std::size_t i = 1; i < run.records.size(); ++i) acc += run.records[i].budget_residual;
        mean_residuals.push_back(acc / double(run.records.size() - 1));
    }
    CHECK(mean_residuals[1] <= 0.6 * mean_residuals[0]);

    // integrated identity: E(T) - E(0) + int dissipation = O(dt) T; the
    // constant is pinned by requiring first-order shrinkage under refinement
    {
        const double T = 0.2;
        double coef = leslie.mu5 + leslie.mu6 +
                      leslie.lambda2() * leslie.lambda2() / leslie.lambda1();
        auto integrated_error = [&](double dt) {
            ShortRun run = integrate(g, params, leslie, st0, dt, T);
            double diss = 0.0;
            for (std::size_t i = 1; i < run.records.size(); ++i) {
                const auto& p = run.records[i - 1];
                const auto& n = run.records[i];
                diss += 0.5 * dt *
                        ((p.diss_visc + n.diss_visc) + (p.diss_rho + n.diss_rho) +
                         (p.diss_mu1 + n.diss_mu1) + coef * (p.diss_aqd + n.diss_aqd));
            }
            CHECK(run.records.back().e_total < run.records.front().e_total);  // decay
            return std::abs(run.records.back().e_total - run.records.front().e_total + diss);
        };
        double coarse = integrated_error(4e-3);
        double fine = integrated_error(2e-3);
        CHECK(fine <= 0.65 * coarse);
        CHECK(fine <= 100.0 * 2e-3 * T);
    }
}

TEST_CASE("case 2 one-sided residual stays O(dt) on a non-Parodi run") {
    GridPtr g = make_grid(2, 32);
    LeslieCoefficients leslie = case2_leslie();
    REQUIRE(validate_constraints(leslie).passed);
    ModelParams params = preset("ML-EL-alpha");

    SimState st0{taylor_green_velocity(g, 0.5),
                 perturbed_constant_director(g, {0.8, 0.2}, 0.2, 3), 0.0};
    double dt = 2e-3;
    ShortRun run = integrate(g, params, leslie, st0, dt, 0.2);
    double worst = 0.0;
    for (std::size_t i = 1; i < run.records.size(); ++i)
        worst = std::max(worst, run.records[i].budget_residual);
    CHECK(worst <= 25.0 * dt);
}

TEST_CASE("steady state solver: perturbed unit constant and the 1D radial oracle") {
    GridPtr g = make_grid(2, 32);

    SpectralField d0 = perturbed_constant_director(g, {1.0, 0.0}, 1e-3, 77);
    SteadyResult res = steady_state_solve(d0, 1e-8, 10000);
    CHECK(res.converged);
    CHECK(res.residual < 1e-8);
    CHECK(res.iterations < 10000);

    // d0 = 0 is an exact (unstable) fixed point
    SteadyResult zero = steady_state_solve(SpectralField(g, Rank::vector), 1e-10, 50);
    CHECK(zero.converged);
    CHECK(zero.residual == 0.0);
    CHECK((zero.d_star).max_abs_coeff() == 0.0);

    // radial constant data follows dr/dtau = -(r^2 - 1) r; compare the k = 0
    // amplitude against a fine RK4 integration of the scalar ODE
    SpectralField r0 = constant_director(g, {1.5, 0.0});
    double kmax2 = g->dim * std::pow(g->dealias_limit() * g->k_scale(), 2);
    double tau = 2.5 / (kmax2 + 8.0);
    int iters = 200;

    SteadyResult flow = steady_state_solve(r0, 1e-30, iters);  // runs all iterations
    double r_flow = flow.d_star.at(0, g->index_of({0, 0, 0})).real();

    auto ode_rhs = [](double r) { return -(r * r - 1.0) * r; };
    double r = 1.5;
    double h = tau / 100.0;
    for (int i = 0; i < iters * 100; ++i) {
        double k1 = ode_rhs(r);
        double k2 = ode_rhs(r + 0.5 * h * k1);
        double k3 = ode_rhs(r + 0.5 * h * k2);
        double k4 = ode_rhs(r + h * k3);
        r += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    CHECK(std::abs(r_flow - r) <= 1e-6);

    // and the long flow converges to the unit constant in the e1 direction
    SteadyResult full = steady_state_solve(r0, 1e-10, 10000);
    CHECK(full.converged);
    CHECK(full.d_star.at(0, g->index_of({0, 0, 0})).real() == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS((void)steady_state_solve(r0, -1.0, 10), std::invalid_argument);
}

TEST_CASE("steady state is a fixed point of the coupled step with u = 0") {
    GridPtr g = make_grid(2, 24);
    LeslieCoefficients leslie = parodi_leslie();
    ModelParams params = preset("SBM-EL");

    SpectralField d0 = perturbed_constant_director(g, {0.9, 0.2}, 0.3, 5);
    SteadyResult res = steady_state_solve(d0, 1e-11, 20000);
    REQUIRE(res.converged);

    SimState st{SpectralField(g, Rank::vector), res.d_star, 0.0};
    auto [next, rep] = step_imex(st, 1e-2, params, leslie, ForcingSpec{});
    double drift = (next.d - st.d).max_abs_coeff() / 1e-2;  // residual-rate of the step
    CHECK(drift <= 1e-9);
    CHECK(rhs_director(st, params, leslie).max_abs_coeff() <= 1e-9);
    (void)rep;
}

TEST_CASE("decay exponent fit: synthetic power law and constants") {
    std::vector<double> t, v, c;
    for (int i = 0; i <= 200; ++i) {
        double ti = 0.5 * i;
        t.push_back(ti);
        v.push_back(2.7 * std::pow(1.0 + ti, -0.7));
        c.push_back(3.3);
    }
    auto [chi, pref, res] = fit_decay_exponent(t, v);
    CHECK(chi == doctest::Approx(0.7).epsilon(0.01));
    CHECK(pref == doctest::Approx(2.7).epsilon(0.01));
    CHECK(res <= 1e-10);

    auto [chi0, pref0, res0] = fit_decay_exponent(t, c);
    CHECK(std::abs(chi0) <= 1e-12);
    CHECK(pref0 == doctest::Approx(3.3).epsilon(1e-10));
    (void)res0;
}

TEST_CASE("dissipative bound check: bounded tail vs injected divergence") {
    std::vector<double> t, bounded, divergent;
    for (int i = 0; i < 200; ++i) {
        t.push_back(0.1 * i);
        bounded.push_back(1.0 + 0.5 * std::exp(-0.1 * i) + 0.01 * std::sin(i));
        divergent.push_back(std::exp(0.05 * i));
    }
    BoundednessReport b = dissipative_bound_check(t, bounded);
    CHECK(b.bounded);
    CHECK(b.c_star > 1.0);
    CHECK(b.entrance_time <= t.back());

    BoundednessReport d = dissipative_bound_check(t, divergent);
    CHECK_FALSE(d.bounded);
}

TEST_CASE("phi functional uses the closed-form forcing tail") {
    GridPtr g = make_grid(2, 16);
    ModelParams params = preset("SBM-EL");
    ForcingSpec spec;
    spec.kind = ForcingKind::decaying;
    spec.profile = taylor_green_velocity(g, 1.0);
    spec.delta = 0.5;

    EnergyRecord rec;
    rec.t = 3.0;
    rec.e_total = 1.25;
    double g0n2 = 2.0;
    double c_a0q = coercivity_constants(params, *g).c_a0q;
    double tail = g0n2 * std::pow(4.0, -1.5) / 1.5;
    double qn = q_operator_norm(params);
    CHECK(phi_functional(rec, params, spec, g0n2, c_a0q) ==
          doctest::Approx(1.25 + 2.0 * qn * qn / c_a0q * tail).epsilon(1e-13));

    // zero forcing: Phi = E_Q
    ForcingSpec none;
    CHECK(phi_functional(rec, params, none, 0.0, c_a0q) == doctest::Approx(1.25));
}

TEST_CASE("dissipative bound holds along an unforced trajectory") {
    GridPtr g = make_grid(2, 24);
    LeslieCoefficients leslie = parodi_leslie();
    ModelParams params = preset("SBM-EL");
    SimState st{taylor_green_velocity(g, 0.5),
                perturbed_constant_director(g, {0.8, 0.2}, 0.2, 3), 0.0};
    std::vector<double> times, values;
    ForcingSpec none;
    for (int i = 0; i <= 100; ++i) {
        EnergyRecord rec = make_energy_record(st, params, leslie, none);
        times.push_back(st.t);
        values.push_back(rec.norm_u_m_theta2 * rec.norm_u_m_theta2 +
                         std::pow(sobolev_norm(st.d, 1.0, NormConvention::director), 2));
        st = step_imex(st, 5e-3, params, leslie, none).first;
    }
    BoundednessReport rep = dissipative_bound_check(times, values);
    CHECK(rep.bounded);
    CHECK(rep.entrance_time == times.front());  // energy decays from the start
}
