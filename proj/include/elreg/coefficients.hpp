#pragma once

#include <string>
#include <vector>

#include "elreg/grid.hpp"
#include "elreg/ops.hpp"

namespace elreg {

// Smoothing exponents and filter scale selecting the regularization model.
// nsv_a0 marks the Navier-Stokes-Voigt dissipation A0 = -mu4*Lap*(I-a^2 Lap)^-1,
// which is order zero but not a pure power of the Laplacian.
struct ModelParams {
    double theta = 1.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    int chi = 0;
    double alpha = 1.0;
    double mu4 = 1.0;
    bool nsv_a0 = false;
    // alternate chi-term assembly: transpose the gradient of Mu instead of Qu
    bool chi_transpose_m = false;

    void validate() const;

    // operator symbols at physical |k|^2
    double a0_symbol(double k2) const;
    double m_symbol(double k2) const;
    double q_symbol(double k2) const;

    SymbolSpec m_spec() const { return SymbolSpec::helmholtz(theta1, alpha); }
    SymbolSpec q_spec() const { return SymbolSpec::helmholtz(theta2, alpha); }
};

enum class CaseSelector { case1 = 1, case2 = 2 };

// Leslie viscosity coefficients with the derived kinematic-transport pair.
struct LeslieCoefficients {
    double mu1 = 0.0;
    double mu2 = -1.0;
    double mu3 = 0.0;
    double mu5 = 0.5;
    double mu6 = 0.5;
    CaseSelector case_selector = CaseSelector::case1;

    double lambda1() const { return mu2 - mu3; }
    double lambda2() const { return mu5 - mu6; }
};

struct ConstraintCheck {
    std::string name;     // which inequality
    double slack;         // >= 0 means satisfied
    bool strict;          // strict inequality (zero slack fails)
    bool ok() const { return strict ? slack > 0.0 : slack >= 0.0; }
};

struct ValidationReport {
    bool passed = true;
    std::vector<ConstraintCheck> checks;

    std::vector<ConstraintCheck> violated() const {
        std::vector<ConstraintCheck> v;
        for (const auto& c : checks)
            if (!c.ok()) v.push_back(c);
        return v;
    }
    std::string describe() const;
};

std::pair<double, double> derive_lambdas(double mu2, double mu3, double mu5, double mu6);

// Checks lama1a/mu14/mu56 plus the Case 1 (Parodi) or Case 2 inequality.
// mu4 positivity belongs to ModelParams and is validated there.
ValidationReport validate_constraints(const LeslieCoefficients& leslie);

// Presets of the six named models; alpha, mu4 and the Leslie coefficients
// stay caller-supplied.
ModelParams preset(const std::string& name);
const std::vector<std::string>& preset_names();

struct CoercivityConstants {
    double c_a0 = 0.0;        // <A0 w, w>      >= c_a0   ||w||_theta^2
    double c_q = 0.0;         // <Q w, w>       >= c_q    ||w||_{-theta2}^2
    double c_a0q = 0.0;       // <A0 w, Q w>    >= c_a0q  ||w||_{theta-theta2}^2
    double c_a0_inf = 0.0;    // analytic infima over |k| >= 2*pi/L
    double c_q_inf = 0.0;
    double c_a0q_inf = 0.0;
};

// Minimum of the symbol ratios over the retained (dealiased) modes of the
// grid, plus a numerical infimum over a dense range of |k|.
CoercivityConstants coercivity_constants(const ModelParams& params, const Grid& grid);

// operator norm ||Q||_{-theta2;theta2} = sup_k |k|^{2 theta2} q(k), analytic sup
double q_operator_norm(const ModelParams& params);

}  // namespace elreg
