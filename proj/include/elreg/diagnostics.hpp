#pragma once

#include <optional>
#include <vector>

#include "elreg/dynamics.hpp"

namespace elreg {

// One time sample of the regularized energy, its dissipation components and
// the discrete budget residual. Field order matches the CSV schema.
struct EnergyRecord {
    double t = 0.0;
    double e_total = 0.0;
    double kinetic = 0.0;             // 1/2 <u, Qu>
    double elastic = 0.0;             // 1/2 ||A1^{1/2} d||^2
    double potential = 0.0;           // int W(d)
    double diss_visc = 0.0;           // <A0 u, Qu>
    double diss_rho = 0.0;            // -(1/lambda1) ||A1 d + f(d)||^2
    double diss_mu1 = 0.0;            // mu1 ||d^T A_Q d||^2
    double diss_aqd = 0.0;            // ||A_Q d||^2
    double diss_nq = 0.0;             // ||N_Q||^2
    double forcing_power = 0.0;       // <g, Qu>
    double budget_residual = 0.0;     // vs previous record; 0 for the first
    double norm_u_m_theta2 = 0.0;     // ||u||_{-theta2}
    double norm_u_theta_m_theta2 = 0.0;  // ||u||_{theta-theta2}
    double max_abs_d = 0.0;
    std::vector<double> extra_norms;  // configured (field, s) columns
};

struct ExtraNorm {
    char field = 'u';  // 'u' or 'd'
    double s = 0.0;
};

// Energy components only (dissipation fields untouched).
EnergyRecord total_energy(const SimState& state, const ModelParams& params,
                          const LeslieCoefficients& leslie);

// Dissipation components; all nonnegative under validated coefficients.
EnergyRecord dissipation_components(const SimState& state, const ModelParams& params,
                                    const LeslieCoefficients& leslie);

// Full record (energy + dissipation + norms + forcing power + extras).
EnergyRecord make_energy_record(const SimState& state, const ModelParams& params,
                                const LeslieCoefficients& leslie, const ForcingSpec& forcing,
                                const std::vector<ExtraNorm>& extras = {});

// Same record assembled from an existing evaluation of `state` (the run loop
// shares one evaluation between the record and the step).
EnergyRecord make_energy_record_from_eval(const SimState& state, const StateEval& eval,
                                          const ModelParams& params,
                                          const LeslieCoefficients& leslie,
                                          const ForcingSpec& forcing,
                                          const std::vector<ExtraNorm>& extras = {});

// Discrete budget residual between consecutive records, fluxes midpoint
// averaged. Case 1 is an identity (two-sided), Case 2 an inequality
// (one-sided, only positive violations count).
double energy_budget_residual(const EnergyRecord& prev, const EnergyRecord& next,
                              double dt, const LeslieCoefficients& leslie);

// ||A1 d + f(d)||_{L2} with f dealiased consistently with the flow
double equilibrium_residual(const SpectralField& d);

struct SteadyResult {
    SpectralField d_star;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Gradient flow d_tau d = -(A1 d + f(d)) integrated with RK4 until the
// equilibrium residual drops below tol.
SteadyResult steady_state_solve(const SpectralField& d0, double tol, int max_iters);

// ---- convergence monitoring --------------------------------------------------

struct DirectorSample {
    double t;
    SpectralField d;
};

struct ConvergenceReport {
    bool fit_ok = false;
    double chi_fit = 0.0;        // ||d - d*|| ~ prefactor (1+t)^{-chi}
    double prefactor = 0.0;
    double fit_residual = 0.0;   // rms residual of the log-log fit
    bool phi_nonincreasing = false;
    double max_phi_increase = 0.0;  // worst positive jump of Phi between records
    double terminal_u_norm = 0.0;   // ||u(T)||_{-theta2}
    double terminal_equilibrium_residual = 0.0;
    bool strong_mode = false;       // theta + theta2 >= 1 and max|d| stayed bounded
    double terminal_d_dist_h1 = 0.0;  // ||d(T) - d*||_1 (director convention)
};

struct ConvergenceOptions {
    double fit_fraction = 0.5;      // fit over the trailing fraction of records
    double transient_factor = 1.1;  // transient ends when E_Q < factor * tail mean
    double phi_tolerance = 0.0;     // allowed per-record Phi increase
};

// least-squares fit of log(values) against log(1+t); returns (chi, prefactor,
// rms residual). Values at or below `floor` are excluded.
std::tuple<double, double, double> fit_decay_exponent(const std::vector<double>& times,
                                                      const std::vector<double>& values,
                                                      double floor = 0.0);

// Phi(t) = E_Q(t) + (2 ||Q||^2_{-theta2;theta2} / c_A0) int_t^inf ||g||^2 ds
double phi_functional(const EnergyRecord& rec, const ModelParams& params,
                      const ForcingSpec& forcing, double g0_norm2, double c_a0q);

ConvergenceReport convergence_monitor(const std::vector<EnergyRecord>& records,
                                      const std::vector<DirectorSample>& director_history,
                                      const SpectralField& d_star,
                                      const SpectralField& u_final,
                                      const ModelParams& params,
                                      const LeslieCoefficients& leslie,
                                      const ForcingSpec& forcing,
                                      const ConvergenceOptions& opts = {});

struct BoundednessReport {
    bool bounded = false;
    double c_star = 0.0;
    double entrance_time = 0.0;
};

// Checks that the series enters and never leaves the ball of radius c_star,
// where c_star = 1.5 x the maximum over a calibration window that ends
// `window` samples before the series does (the trailing samples verify).
BoundednessReport dissipative_bound_check(const std::vector<double>& times,
                                          const std::vector<double>& values, int window = 0);

}  // namespace elreg
