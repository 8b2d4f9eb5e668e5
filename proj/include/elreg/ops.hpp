#pragma once

#include "elreg/fft.hpp"
#include "elreg/field.hpp"

namespace elreg {

// ---- differentiation ------------------------------------------------------

// d/dx_axis, coefficient-wise i*k_axis*(2*pi/L). Nyquist modes are zeroed so
// realness is preserved.
SpectralField derivative(const SpectralField& f, int axis);

// Jacobian of a vector field, (grad v)_{ij} = d v_i / d x_j.
SpectralField velocity_gradient(const SpectralField& v);

// row-wise divergence of a tensor, (div T)_i = sum_j d T_{ij} / d x_j
SpectralField divergence(const SpectralField& tensor);

// divergence of a vector field -> scalar
SpectralField divergence_vec(const SpectralField& v);

// ---- projections ----------------------------------------------------------

// Leray projection: per mode k != 0 apply I - k k^T/|k|^2; mean mode zeroed.
SpectralField leray_project(const SpectralField& vf);

// largest |sum_a k_a uhat_a(k)| over modes (divergence residual in k-space)
double divergence_residual(const SpectralField& vf);

// ---- spectral multipliers ---------------------------------------------------

struct SymbolSpec {
    enum class Kind { lambda_pow, a0, helmholtz, inv_helmholtz, a1_pow } kind;
    double s = 0.0;      // exponent (power / theta)
    double alpha = 1.0;  // filter scale (helmholtz kinds)
    double mu4 = 1.0;    // viscosity (a0)

    static SymbolSpec lambda_pow(double s);
    static SymbolSpec a0(double theta, double mu4);
    static SymbolSpec helmholtz(double theta, double alpha);
    static SymbolSpec inv_helmholtz(double theta, double alpha);
    static SymbolSpec a1_pow(double s);

    double eval(double k2) const;        // value at physical |k|^2, k != 0
    bool needs_zero_mean() const;        // negative powers of |k|
    double mean_value() const;           // value applied at k = 0
};

SpectralField apply_multiplier(const SpectralField& f, const SymbolSpec& sym);

// ---- norms and pairings -----------------------------------------------------

enum class NormConvention { velocity, director };

// velocity: ||f||_s^2 = L^dim sum_{k!=0} |k|^{2s} |fhat|^2  (all components)
// director: ||f||_s^2 = L^dim sum_k (1+|k|^2)^s |fhat|^2
double sobolev_norm(const SpectralField& f, double s, NormConvention conv);

// integral of f.g over the torus via Parseval
double inner_product(const SpectralField& f, const SpectralField& g);

// ---- dealiasing and products ------------------------------------------------

// 2/3 rule: zero every coefficient with |k_axis| > n/3 on any axis; idempotent
SpectralField dealias(const SpectralField& f);

// enforce fhat(-k) = conj(fhat(k)) (and real self-conjugate modes)
void enforce_conjugate_symmetry(SpectralField& f);

// zero the k = 0 coefficient of every component
void zero_mean_mode(SpectralField& f);

// Pointwise products, evaluated on the 3/2-padded grid and truncated back to
// the operand grid (alias-free for quadratics). Rank of the result follows
// the variant.
namespace prod {
SpectralField scalar_times(const SpectralField& s, const SpectralField& f);
SpectralField dot(const SpectralField& a, const SpectralField& b);        // vec.vec -> scalar
SpectralField matvec(const SpectralField& t, const SpectralField& v);     // tensor.vec -> vec
SpectralField outer(const SpectralField& a, const SpectralField& b);      // vec (x) vec -> tensor
SpectralField advect(const SpectralField& v, const SpectralField& f);     // (v.grad)f, f vec
SpectralField grad_weighted(const SpectralField& psi, const SpectralField& d);  // sum_j psi_j grad d_j
}  // namespace prod

// rectangle-rule integral of a scalar physical field (exact for trig
// polynomials below the grid band)
double integrate(const PhysicalField& f);

}  // namespace elreg
