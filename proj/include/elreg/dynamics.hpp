#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

#include "elreg/coefficients.hpp"
#include "elreg/el_terms.hpp"
#include "elreg/field.hpp"

namespace elreg {

// Evolved unknown: u (not v = Qu), divergence-free with zero mean.
struct SimState {
    SpectralField u;
    SpectralField d;
    double t = 0.0;
};

struct BlowupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ForcingKind { zero, steady, decaying };

struct ForcingSpec {
    ForcingKind kind = ForcingKind::zero;
    SpectralField profile;  // g0, divergence-free, zero mean
    double delta = 0.5;     // decay parameter in (0,1)

    // time amplitude: zero -> 0, steady -> 1, decaying -> (1+t)^{-(1+delta/2)}
    double amplitude(double t) const;
    // closed form of int_t^inf ||g(s)||^2_{-theta-theta2} ds given ||g0||^2
    double tail_integral(double t, double g0_norm2) const;
    void validate() const;
};

SpectralField forcing_eval(const ForcingSpec& spec, double t, const GridPtr& grid);

struct StepReport {
    double dt_used = 0.0;
    double max_abs_d = 0.0;
    double cfl_estimate = 0.0;         // max|v| dt n / L, warn above 0.5
    double divergence_residual = 0.0;  // spectral residual of u after the step
};

// Both explicit right-hand sides plus the pointwise diagnostics, assembled
// in one pass over the padded grid (every per-step quantity shares the same
// transforms). rho = A1 d + f(d) with f dealiased, the quadratic/quartic
// integrals are full-band padded quadratures.
struct StateEval {
    SpectralField rhs_u;
    SpectralField rhs_d;
    bool has_diagnostics = false;
    double potential = 0.0;  // int W(d)
    double int_s2 = 0.0;     // int (d^T A_Q d)^2
    double int_ad2 = 0.0;    // int |A_Q d|^2
    double int_nq2 = 0.0;    // int |N_Q|^2
    SpectralField rho;
};

StateEval evaluate_rhs(const SimState& state, const ModelParams& params,
                       const LeslieCoefficients& leslie, const ForcingSpec& forcing, double t,
                       bool want_diagnostics);

// Explicit part of the velocity equation (the stiff -A0 u term is handled
// implicitly by the stepper):
//   P[-B0(u,u) + R0(A1 d, d) + div(sigma_Q) + g]
SpectralField rhs_velocity(const SimState& state, const ModelParams& params,
                           const LeslieCoefficients& leslie, const ForcingSpec& forcing,
                           double t);

// Explicit part of the director equation (the stiff (1/lambda1) A1 d term is
// implicit):  -B1(u,d) + omega_Q d - (lambda2/lambda1) A_Q d + (1/lambda1) f(d)
SpectralField rhs_director(const SimState& state, const ModelParams& params,
                           const LeslieCoefficients& leslie);

// One first-order IMEX Euler step; re-projects and re-dealiases.
std::pair<SimState, StepReport> step_imex(const SimState& state, double dt,
                                          const ModelParams& params,
                                          const LeslieCoefficients& leslie,
                                          const ForcingSpec& forcing,
                                          double blowup_threshold = 1e6);

enum class TimeScheme { imex1, cnab2 };

// Stepper owning the multistep history; cnab2 = Crank-Nicolson diffusion with
// Adams-Bashforth explicit terms, bootstrapped by one IMEX Euler step.
class TimeStepper {
  public:
    TimeStepper(TimeScheme scheme, const ModelParams& params, const LeslieCoefficients& leslie,
                const ForcingSpec& forcing, double blowup_threshold)
        : scheme_(scheme), params_(params), leslie_(leslie), forcing_(forcing),
          blowup_(blowup_threshold) {}

    // pre: optional already-computed evaluation of `state`; want_report
    // controls the physical-space fields of the StepReport (the blow-up
    // check always runs)
    StepReport advance(SimState& state, double dt, const StateEval* pre = nullptr,
                       bool want_report = true);

  private:
    TimeScheme scheme_;
    ModelParams params_;
    LeslieCoefficients leslie_;
    ForcingSpec forcing_;
    double blowup_;
    std::optional<SpectralField> prev_rhs_u_;
    std::optional<SpectralField> prev_rhs_d_;
    double prev_dt_ = 0.0;
    // cached stiff symbols per mode (params and leslie are fixed)
    std::vector<double> sym_u_, sym_d_;

    void ensure_symbols(const Grid& g);
};

// deterministic generator (hand-rolled gaussian so streams are stable)
struct Rng {
    explicit Rng(std::uint64_t seed);
    double uniform();   // [0,1)
    double gaussian();  // standard normal, Box-Muller

  private:
    std::uint64_t s_[4];
    std::uint64_t next();
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// ---- built-in initial conditions -------------------------------------------

SpectralField taylor_green_velocity(const GridPtr& grid, double amplitude);
SpectralField random_solenoidal_velocity(const GridPtr& grid, double amplitude,
                                         double spectrum_slope, std::uint64_t seed);
SpectralField constant_director(const GridPtr& grid, const std::vector<double>& vec);
SpectralField perturbed_constant_director(const GridPtr& grid, const std::vector<double>& vec,
                                          double amplitude, std::uint64_t seed);
// unit-length director field amplitude*(cos phi, sin phi[, 0]) with a winding
// phase phi = 2 pi x0 / L + small random low-mode perturbation; the gradient
// of phi stays bounded away from zero, so |d| has no room to grow under the
// Ginzburg-Landau term
SpectralField random_unit_director(const GridPtr& grid, double amplitude, std::uint64_t seed);

// max over the physical grid of |d(x)|; ok iff max <= bound (1 + tol)
std::pair<bool, double> max_principle_monitor(const SpectralField& d, double bound,
                                              double tol = 1e-6);

}  // namespace elreg
