#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "elreg/coefficients.hpp"
#include "elreg/dynamics.hpp"

using namespace elreg;

namespace {
bool has_failed_check(const ValidationReport& r, const std::string& fragment) {
    for (const auto& c : r.violated())
        if (c.name.find(fragment) != std::string::npos) return true;
    return false;
}
}  // namespace

TEST_CASE("derive_lambdas arithmetic") {
    CHECK(derive_lambdas(-1.0, 0.5, 0.0, 0.0).first == doctest::Approx(-1.5));
    CHECK(derive_lambdas(0.0, 0.0, 1.0, 0.5).second == doctest::Approx(0.5));
    auto [l1, l2] = derive_lambdas(0.0, 0.0, 0.0, 0.0);
    CHECK(l1 == 0.0);
    LeslieCoefficients degenerate;
    degenerate.mu2 = 0.0;
    degenerate.mu3 = 0.0;
    CHECK_FALSE(validate_constraints(degenerate).passed);
    (void)l2;
}

TEST_CASE("case 1 validation with Parodi") {
    // lambda1 = -1, lambda2 = 1, mu5+mu6 = 2, Parodi holds
    LeslieCoefficients l;
    l.mu1 = 0.0;
    l.mu2 = -1.0;
    l.mu3 = 0.0;
    l.mu5 = 1.5;
    l.mu6 = 0.5;
    l.case_selector = CaseSelector::case1;
    REQUIRE(l.lambda1() == doctest::Approx(-1.0));
    REQUIRE(l.lambda2() == doctest::Approx(1.0));
    ValidationReport rep = validate_constraints(l);
    CHECK(rep.passed);
    // slack of lambda2^2/(-lambda1) <= mu5+mu6 equals 1
    bool found = false;
    for (const auto& c : rep.checks)
        if (c.name.find("critical point") != std::string::npos) {
            CHECK(c.slack == doctest::Approx(1.0));
            found = true;
        }
    CHECK(found);
}

TEST_CASE("lama1a rejection when mu2 = mu3") {
    LeslieCoefficients l;
    l.mu2 = 0.7;
    l.mu3 = 0.7;
    l.mu5 = 1.0;
    l.mu6 = 1.0;
    ValidationReport rep = validate_constraints(l);
    CHECK_FALSE(rep.passed);
    CHECK(has_failed_check(rep, "lama1a"));
}

TEST_CASE("case 2 inequality: failure, pass, and strict equality") {
    // lambda2 = 3, mu2+mu3 = 0, lambda1 = -1, mu5+mu6 = 2: 3 >= 2 sqrt(2)
    LeslieCoefficients fail;
    fail.mu2 = -0.5;
    fail.mu3 = 0.5;
    fail.mu5 = 2.5;
    fail.mu6 = -0.5;
    fail.case_selector = CaseSelector::case2;
    ValidationReport rep = validate_constraints(fail);
    CHECK_FALSE(rep.passed);
    CHECK(has_failed_check(rep, "noPa1"));

    LeslieCoefficients pass = fail;
    pass.mu5 = 1.2;
    pass.mu6 = 0.7;  // lambda2 = 0.5, |0.5| < 2 sqrt(1.9)
    CHECK(validate_constraints(pass).passed);

    // exact equality fails with zero slack
    LeslieCoefficients eq;
    eq.mu2 = -0.5;
    eq.mu3 = 0.5;   // lambda1 = -1, mu2+mu3 = 0
    eq.mu5 = 1.5;
    eq.mu6 = -0.5;  // lambda2 = 2, mu5+mu6 = 1, rhs = 2
    eq.case_selector = CaseSelector::case2;
    ValidationReport erep = validate_constraints(eq);
    CHECK_FALSE(erep.passed);
    for (const auto& c : erep.violated())
        if (c.name.find("noPa1") != std::string::npos) CHECK(std::abs(c.slack) <= 1e-14);
}

TEST_CASE("case 1 pass is preserved under uniform doubling") {
    Rng rng(12);
    int tested = 0;
    while (tested < 50) {
        LeslieCoefficients l;
        l.mu1 = rng.uniform();
        l.mu3 = 2.0 * rng.gaussian();
        l.mu2 = l.mu3 - (0.1 + 2.0 * rng.uniform());  // lambda1 < 0
        l.mu5 = 2.0 * rng.gaussian();
        // Parodi fixes mu6 given the rest: mu2 + mu3 = mu6 - mu5
        l.mu6 = l.mu2 + l.mu3 + l.mu5;
        l.case_selector = CaseSelector::case1;
        if (!validate_constraints(l).passed) continue;
        ++tested;
        LeslieCoefficients scaled = l;
        scaled.mu2 *= 2.0;
        scaled.mu3 *= 2.0;
        scaled.mu5 *= 2.0;
        scaled.mu6 *= 2.0;
        CHECK(validate_constraints(scaled).passed);
    }
}

TEST_CASE("presets match the published table") {
    ModelParams nsv = preset("NSV-EL");
    CHECK(nsv.theta == 0.0);
    CHECK(nsv.theta1 == 1.0);
    CHECK(nsv.theta2 == 1.0);
    CHECK(nsv.chi == 0);
    CHECK(nsv.nsv_a0);

    ModelParams nsa = preset("NS-EL-alpha");
    CHECK(nsa.theta == 1.0);
    CHECK(nsa.theta1 == 0.0);
    CHECK(nsa.theta2 == 1.0);
    CHECK(nsa.chi == 1);

    ModelParams sbm = preset("SBM-EL");
    CHECK(sbm.theta == 1.0);
    CHECK(sbm.theta1 == 1.0);
    CHECK(sbm.theta2 == 1.0);
    CHECK(sbm.chi == 0);

    ModelParams nse = preset("NSE-EL");
    CHECK(nse.theta == 1.0);
    CHECK(nse.theta1 == 0.0);
    CHECK(nse.theta2 == 0.0);

    ModelParams leray = preset("Leray-EL-alpha");
    CHECK(leray.theta1 == 1.0);
    CHECK(leray.theta2 == 0.0);

    ModelParams ml = preset("ML-EL-alpha");
    CHECK(ml.theta1 == 0.0);
    CHECK(ml.theta2 == 1.0);

    try {
        preset("Bardina");
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        for (const auto& name : preset_names())
            CHECK(msg.find(name) != std::string::npos);
    }
}

TEST_CASE("coercivity constants: collapse cases and the SBM minimum") {
    Grid grid(2, 32, 2.0 * M_PI);

    ModelParams nse = preset("NSE-EL");
    nse.mu4 = 1.7;
    CoercivityConstants cc = coercivity_constants(nse, grid);
    CHECK(cc.c_q == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cc.c_a0q == doctest::Approx(1.7).epsilon(1e-15));

    ModelParams sbm = preset("SBM-EL");
    sbm.alpha = 1.0;
    CoercivityConstants sc = coercivity_constants(sbm, grid);
    CHECK(sc.c_q == doctest::Approx(0.5).epsilon(1e-15));  // attained at |k| = 1
    CHECK(sc.c_a0q > 0.0);
    CHECK(sc.c_q_inf <= sc.c_q + 1e-15);

    for (const auto& name : preset_names()) {
        ModelParams p = preset(name);
        CoercivityConstants c = coercivity_constants(p, grid);
        CHECK(c.c_a0 > 0.0);
        CHECK(c.c_q > 0.0);
        CHECK(c.c_a0q > 0.0);
    }
}

TEST_CASE("sampled coercivity inequalities and Q self-adjointness") {
    GridPtr grid = make_grid(2, 32);
    for (const auto& name : preset_names()) {
        ModelParams params = preset(name);
        params.alpha = 1.2;
        params.mu4 = 0.9;
        CoercivityConstants cc = coercivity_constants(params, *grid);
        for (int s = 0; s < 10; ++s) {
            SpectralField w = random_solenoidal_velocity(grid, 1.0, -1.0, 500 + s);
            SpectralField qw = apply_multiplier(w, params.q_spec());
            double lhs_q = inner_product(qw, w);
            double rhs_q =
                cc.c_q * std::pow(sobolev_norm(w, -params.theta2, NormConvention::velocity), 2);
            CHECK(lhs_q >= rhs_q * (1.0 - 1e-12));

            SpectralField a0w(grid, Rank::vector);
            for (std::size_t m = 0; m < w.modes(); ++m) {
                double sym = params.a0_symbol(grid->k2(m));
                for (int c = 0; c < grid->dim; ++c) a0w.at(c, m) = sym * w.at(c, m);
            }
            double lhs_a = inner_product(a0w, qw);
            double rhs_a = cc.c_a0q * std::pow(sobolev_norm(w, params.theta - params.theta2,
                                                            NormConvention::velocity),
                                               2);
            CHECK(lhs_a >= rhs_a * (1.0 - 1e-12));

            SpectralField f = random_solenoidal_velocity(grid, 1.0, -2.0, 900 + s);
            double qfg = inner_product(qw, f);
            double fqg = inner_product(w, apply_multiplier(f, params.q_spec()));
            CHECK(qfg == doctest::Approx(fqg).epsilon(1e-13));
        }
    }
}

TEST_CASE("model params validation") {
    ModelParams p = preset("NSE-EL");
    p.mu4 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = preset("NSE-EL");
    p.alpha = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = preset("NSE-EL");
    p.theta2 = -0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
