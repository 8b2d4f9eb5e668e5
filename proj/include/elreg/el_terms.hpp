#pragma once

#include "elreg/coefficients.hpp"
#include "elreg/field.hpp"
#include "elreg/ops.hpp"

namespace elreg {

// Strain/rotation tensors and the Leslie stress of one state, all built from
// the filtered velocity v = Qu.
struct StressTensors {
    SpectralField a_q;      // symmetric strain, 1/2 (grad v + grad v^T)
    SpectralField omega_q;  // skew part, 1/2 (grad v - grad v^T)
    SpectralField n_q;      // co-rotational rate, by substitution
    SpectralField sigma_q;  // Leslie stress
};

SpectralField rate_of_strain(const SpectralField& v);
SpectralField vorticity_skew(const SpectralField& v);

// N_Q with d_t d eliminated through the director equation:
//   N_Q = (1/lambda1)(A1 d + f(d)) - (lambda2/lambda1) A_Q d
SpectralField n_q_substituted(const SpectralField& d, const SpectralField& a_q,
                              const LeslieCoefficients& leslie);

// sigma_Q = mu1 (d^T A d) d(x)d + mu2 N(x)d + mu3 d(x)N + mu5 (Ad)(x)d + mu6 d(x)(Ad)
SpectralField leslie_stress(const SpectralField& d, const SpectralField& a_q,
                            const SpectralField& n_q, const LeslieCoefficients& leslie);

// Elastic force sum_j (A1 d)_j grad d_j; its Leray projection coincides with
// P[-div(grad d (.) grad d)].
SpectralField ericksen_force(const SpectralField& d);

// -div(grad d (.) grad d), the Ericksen-stress route (used as the second leg
// of the identity check)
SpectralField ericksen_force_div_form(const SpectralField& d);

// B0(u,u) = P[(Mu.grad)(Qu) + chi sum_j (Mu)_j grad (Qu)_j], dealiased.
// chi_transpose_m swaps the roles of Mu and Qu inside the chi term.
SpectralField b0_nonlinear(const SpectralField& u, const ModelParams& params);

// B1(u,d) = (Qu.grad) d, dealiased
SpectralField b1_transport(const SpectralField& u, const SpectralField& d,
                           const ModelParams& params);

struct GinzburgLandau {
    SpectralField force;        // (|d|^2 - 1) d, dealiased
    double potential_integral;  // integral of W(d) = 1/4 (|d|^2-1)^2, >= 0
};
GinzburgLandau ginzburg_landau_force(const SpectralField& d);

// b0(u,v,w) = <B0(u,v), w>, evaluated by padded quadrature with no
// intermediate truncation
double trilinear_b0(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                    const ModelParams& params);

// b1(u,psi,phi) = <Qu.grad psi, phi>
double trilinear_b1(const SpectralField& u, const SpectralField& psi, const SpectralField& phi,
                    const ModelParams& params);

// All four tensors for a state (v = Qu derived internally); products dealiased.
StressTensors assemble_stresses(const SpectralField& u, const SpectralField& d,
                                const ModelParams& params, const LeslieCoefficients& leslie);

}  // namespace elreg
