#include "elreg/dynamics.hpp"

#include <cmath>

namespace elreg {

// ---- forcing ----------------------------------------------------------------

void ForcingSpec::validate() const {
    if (kind == ForcingKind::decaying && !(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("ForcingSpec: delta must lie in (0,1)");
}

double ForcingSpec::amplitude(double t) const {
    switch (kind) {
        case ForcingKind::zero: return 0.0;
        case ForcingKind::steady: return 1.0;
        case ForcingKind::decaying: return std::pow(1.0 + t, -(1.0 + 0.5 * delta));
    }
    return 0.0;
}

double ForcingSpec::tail_integral(double t, double g0_norm2) const {
    switch (kind) {
        case ForcingKind::zero: return 0.0;
        case ForcingKind::steady:
            return std::numeric_limits<double>::infinity();
        case ForcingKind::decaying:
            // int_t^inf (1+s)^{-(2+delta)} ds = (1+t)^{-(1+delta)} / (1+delta)
            return g0_norm2 * std::pow(1.0 + t, -(1.0 + delta)) / (1.0 + delta);
    }
    return 0.0;
}

SpectralField forcing_eval(const ForcingSpec& spec, double t, const GridPtr& grid) {
    spec.validate();
    if (spec.kind == ForcingKind::zero) return SpectralField(grid, Rank::vector);
    SpectralField g = spec.profile;
    g *= spec.amplitude(t);
    return g;
}

// ---- right-hand sides ---------------------------------------------------------

namespace {

// inverse-transform one component derivative d f_c / d x_axis onto the
// padded grid
PhysicalField pad_component_derivative(const SpectralField& f, int comp, int axis,
                                       const GridPtr& pad) {
    SpectralField fc(f.grid_ptr(), Rank::scalar);
    auto src = f.component(comp);
    auto dst = fc.component(0);
    for (std::size_t m = 0; m < f.modes(); ++m) dst[m] = src[m];
    return fft::to_physical(derivative(fc, axis), pad);
}

}  // namespace

StateEval evaluate_rhs(const SimState& state, const ModelParams& params,
                       const LeslieCoefficients& leslie, const ForcingSpec& forcing, double t,
                       bool want_diagnostics) {
    const double l1 = leslie.lambda1();
    if (l1 >= 0.0) throw std::invalid_argument("evaluate_rhs: lambda1 must be < 0");
    const double l2 = leslie.lambda2();
    const Grid& g = state.u.grid();
    const int dim = g.dim;
    GridPtr pad = fft::padded_grid(g);
    const std::size_t npts = pad->total();

    SpectralField mu = apply_multiplier(state.u, params.m_spec());
    SpectralField qu = apply_multiplier(state.u, params.q_spec());
    SpectralField a1d = apply_multiplier(state.d, SymbolSpec::a1_pow(1.0));

    PhysicalField dp = fft::to_physical(state.d, pad);
    PhysicalField a1dp = fft::to_physical(a1d, pad);
    PhysicalField mup = fft::to_physical(mu, pad);
    PhysicalField qup = fft::to_physical(qu, pad);

    // grad_d[c][a] = d d_c / d x_a, grad_qu[c][a] = d (Qu)_c / d x_a
    std::vector<PhysicalField> grad_d(static_cast<std::size_t>(dim) * dim);
    std::vector<PhysicalField> grad_qu(static_cast<std::size_t>(dim) * dim);
    for (int c = 0; c < dim; ++c)
        for (int a = 0; a < dim; ++a) {
            grad_d[c * dim + a] = pad_component_derivative(state.d, c, a, pad);
            grad_qu[c * dim + a] = pad_component_derivative(qu, c, a, pad);
        }

    PhysicalField fgl(pad, Rank::vector);   // Ginzburg-Landau force, full band
    PhysicalField adp(pad, Rank::vector);   // A_Q d, full band
    PhysicalField vel(pad, Rank::vector);   // -B0bar + ericksen force
    PhysicalField dir(pad, Rank::vector);   // -B1 + omega_Q d

    StateEval out;
    double pot = 0.0, s2 = 0.0, ad2 = 0.0;
    double dv[3], a1v[3], ad[3], muv[3], quv[3];
    double A[3][3], W[3][3];
    for (std::size_t p = 0; p < npts; ++p) {
        double r2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            dv[c] = dp.at(c, p);
            a1v[c] = a1dp.at(c, p);
            muv[c] = mup.at(c, p);
            quv[c] = qup.at(c, p);
            r2 += dv[c] * dv[c];
        }
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double gij = grad_qu[i * dim + j].at(0, p);  // d (Qu)_i / d x_j
                double gji = grad_qu[j * dim + i].at(0, p);
                A[i][j] = 0.5 * (gij + gji);
                W[i][j] = 0.5 * (gij - gji);
            }
        const double s_gl = r2 - 1.0;
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            double adi = 0.0, wdi = 0.0;
            for (int j = 0; j < dim; ++j) {
                adi += A[i][j] * dv[j];
                wdi += W[i][j] * dv[j];
            }
            ad[i] = adi;
            adp.at(i, p) = adi;
            fgl.at(i, p) = s_gl * dv[i];
            s += dv[i] * adi;

            double er = 0.0, b0 = 0.0, b1 = 0.0;
            for (int j = 0; j < dim; ++j) {
                er += a1v[j] * grad_d[j * dim + i].at(0, p);
                b0 += muv[j] * grad_qu[i * dim + j].at(0, p);
                if (params.chi == 1 && !params.chi_transpose_m)
                    b0 += muv[j] * grad_qu[j * dim + i].at(0, p);
                b1 += quv[j] * grad_d[i * dim + j].at(0, p);
            }
            vel.at(i, p) = er - b0;
            dir.at(i, p) = -b1 + wdi;
        }

        if (want_diagnostics) {
            pot += 0.25 * s_gl * s_gl;
            s2 += s * s;
            for (int i = 0; i < dim; ++i) ad2 += ad[i] * ad[i];
        }
    }

    SpectralField f_hat = fft::to_spectral(fgl, state.d.grid_ptr());
    SpectralField ad_hat = fft::to_spectral(adp, state.d.grid_ptr());

    // director equation terms of the f / A_Q d kind enter spectrally; one
    // outer dealias matches the individually dealiased modular assembly
    SpectralField dir_hat = fft::to_spectral(dir, state.d.grid_ptr());
    dir_hat.axpy(-l2 / l1, ad_hat);
    dir_hat.axpy(1.0 / l1, f_hat);
    out.rhs_d = dealias(dir_hat);

    // the substituted co-rotational rate is dealiased before entering the
    // stress, exactly as n_q_substituted builds it
    SpectralField nq_hat = a1d;
    nq_hat += f_hat;
    nq_hat *= 1.0 / l1;
    nq_hat.axpy(-l2 / l1, ad_hat);
    nq_hat = dealias(nq_hat);
    PhysicalField nqp = fft::to_physical(nq_hat, pad);

    PhysicalField sigma(pad, Rank::tensor);
    for (std::size_t p = 0; p < npts; ++p) {
        double s = 0.0;
        for (int c = 0; c < dim; ++c) {
            dv[c] = dp.at(c, p);
            ad[c] = adp.at(c, p);
            s += dv[c] * ad[c];
        }
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                sigma.at(sigma.tidx(i, j), p) =
                    leslie.mu1 * s * dv[i] * dv[j] + leslie.mu2 * nqp.at(i, p) * dv[j] +
                    leslie.mu3 * dv[i] * nqp.at(j, p) + leslie.mu5 * ad[i] * dv[j] +
                    leslie.mu6 * dv[i] * ad[j];
    }

    SpectralField vel_hat = fft::to_spectral(vel, state.u.grid_ptr());
    if (params.chi == 1 && params.chi_transpose_m)
        vel_hat -= prod::grad_weighted(qu, mu);
    SpectralField sigma_hat = dealias(fft::to_spectral(sigma, state.u.grid_ptr()));
    vel_hat += divergence(sigma_hat);
    if (forcing.kind != ForcingKind::zero) vel_hat += forcing_eval(forcing, t, state.u.grid_ptr());
    out.rhs_u = dealias(leray_project(vel_hat));

    if (want_diagnostics) {
        out.has_diagnostics = true;
        const double vol = pad->cell_volume();
        out.potential = pot * vol;
        out.int_s2 = s2 * vol;
        out.int_ad2 = ad2 * vol;
        out.int_nq2 = std::pow(sobolev_norm(nq_hat, 0.0, NormConvention::director), 2);
        out.rho = a1d;
        out.rho += dealias(f_hat);
    }
    return out;
}

SpectralField rhs_velocity(const SimState& state, const ModelParams& params,
                           const LeslieCoefficients& leslie, const ForcingSpec& forcing,
                           double t) {
    return evaluate_rhs(state, params, leslie, forcing, t, false).rhs_u;
}

SpectralField rhs_director(const SimState& state, const ModelParams& params,
                           const LeslieCoefficients& leslie) {
    ForcingSpec none;
    return evaluate_rhs(state, params, leslie, none, state.t, false).rhs_d;
}

// ---- stepping ----------------------------------------------------------------

namespace {

StepReport finish_step(SimState& next, double dt, const ModelParams& params,
                       double blowup_threshold, bool want_report) {
    next.u = dealias(leray_project(next.u));
    zero_mean_mode(next.u);
    next.d = dealias(next.d);

    StepReport rep;
    rep.dt_used = dt;
    if (want_report) {
        SpectralField v = apply_multiplier(next.u, params.q_spec());
        PhysicalField vp = fft::to_physical(v);
        PhysicalField dp = fft::to_physical(next.d);
        rep.cfl_estimate = vp.max_pointwise_norm() * dt * next.u.grid().n / next.u.grid().length;
        rep.max_abs_d = dp.max_pointwise_norm();
        rep.divergence_residual = divergence_residual(next.u);
    }
    if (!next.u.all_finite() || !next.d.all_finite())
        throw BlowupError("non-finite state detected (blow-up) at t = " + std::to_string(next.t));
    if (std::max({next.u.max_abs_coeff(), next.d.max_abs_coeff(), rep.max_abs_d}) >
        blowup_threshold)
        throw BlowupError("state exceeded blow-up threshold at t = " + std::to_string(next.t));
    return rep;
}

// implicit symbols of the stiff diagonal terms
double velocity_stiff_symbol(const ModelParams& params, double k2) {
    return params.a0_symbol(k2);
}
double director_stiff_symbol(const LeslieCoefficients& leslie, double k2) {
    return k2 / std::abs(leslie.lambda1());
}

}  // namespace

std::pair<SimState, StepReport> step_imex(const SimState& state, double dt,
                                          const ModelParams& params,
                                          const LeslieCoefficients& leslie,
                                          const ForcingSpec& forcing, double blowup_threshold) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_imex: dt must be positive");
    params.validate();

    StateEval eval = evaluate_rhs(state, params, leslie, forcing, state.t, false);
    const SpectralField& fu = eval.rhs_u;
    const SpectralField& fd = eval.rhs_d;

    const Grid& g = state.u.grid();
    SimState next{state.u, state.d, state.t + dt};
    for (std::size_t m = 0; m < state.u.modes(); ++m) {
        double k2 = g.k2(m);
        double du = 1.0 / (1.0 + dt * velocity_stiff_symbol(params, k2));
        double dd = 1.0 / (1.0 + dt * director_stiff_symbol(leslie, k2));
        for (int c = 0; c < g.dim; ++c) {
            next.u.at(c, m) = (state.u.at(c, m) + dt * fu.at(c, m)) * du;
            next.d.at(c, m) = (state.d.at(c, m) + dt * fd.at(c, m)) * dd;
        }
    }
    StepReport rep = finish_step(next, dt, params, blowup_threshold, true);
    return {next, rep};
}

void TimeStepper::ensure_symbols(const Grid& g) {
    if (sym_u_.size() == g.total()) return;
    sym_u_.resize(g.total());
    sym_d_.resize(g.total());
    for (std::size_t m = 0; m < g.total(); ++m) {
        sym_u_[m] = velocity_stiff_symbol(params_, g.k2(m));
        sym_d_[m] = director_stiff_symbol(leslie_, g.k2(m));
    }
}

StepReport TimeStepper::advance(SimState& state, double dt, const StateEval* pre,
                                bool want_report) {
    if (!(dt > 0.0)) throw std::invalid_argument("TimeStepper: dt must be positive");
    StateEval own;
    if (!pre) {
        own = evaluate_rhs(state, params_, leslie_, forcing_, state.t, false);
        pre = &own;
    }
    const SpectralField& fu_now = pre->rhs_u;
    const SpectralField& fd_now = pre->rhs_d;
    ensure_symbols(state.u.grid());

    if (scheme_ == TimeScheme::imex1) {
        const Grid& gr = state.u.grid();
        SimState next{state.u, state.d, state.t + dt};
        for (std::size_t m = 0; m < state.u.modes(); ++m) {
            double du = 1.0 / (1.0 + dt * sym_u_[m]);
            double dd = 1.0 / (1.0 + dt * sym_d_[m]);
            for (int c = 0; c < gr.dim; ++c) {
                next.u.at(c, m) = (state.u.at(c, m) + dt * fu_now.at(c, m)) * du;
                next.d.at(c, m) = (state.d.at(c, m) + dt * fd_now.at(c, m)) * dd;
            }
        }
        StepReport rep = finish_step(next, dt, params_, blowup_, want_report);
        state = next;
        return rep;
    }

    // CNAB2: Crank-Nicolson on the stiff diagonal, Adams-Bashforth 2 on the
    // explicit terms; first step falls back to IMEX Euler.
    const SpectralField& fu = fu_now;
    const SpectralField& fd = fd_now;

    const Grid& g = state.u.grid();
    SimState next{state.u, state.d, state.t + dt};
    const bool have_prev = prev_rhs_u_.has_value() && prev_dt_ == dt;
    for (std::size_t m = 0; m < state.u.modes(); ++m) {
        double su = sym_u_[m];
        double sd = sym_d_[m];
        for (int c = 0; c < g.dim; ++c) {
            std::complex<double> eu, ed;
            if (have_prev) {
                eu = 1.5 * fu.at(c, m) - 0.5 * prev_rhs_u_->at(c, m);
                ed = 1.5 * fd.at(c, m) - 0.5 * prev_rhs_d_->at(c, m);
            } else {
                eu = fu.at(c, m);
                ed = fd.at(c, m);
            }
            next.u.at(c, m) =
                ((1.0 - 0.5 * dt * su) * state.u.at(c, m) + dt * eu) / (1.0 + 0.5 * dt * su);
            next.d.at(c, m) =
                ((1.0 - 0.5 * dt * sd) * state.d.at(c, m) + dt * ed) / (1.0 + 0.5 * dt * sd);
        }
    }
    prev_rhs_u_ = fu;
    prev_rhs_d_ = fd;
    prev_dt_ = dt;
    StepReport rep = finish_step(next, dt, params_, blowup_, want_report);
    state = next;
    return rep;
}

// ---- rng -----------------------------------------------------------------------

// xoshiro256++; seeded through splitmix64
Rng::Rng(std::uint64_t seed) {
    auto splitmix = [&seed]() {
        seed += 0x9E3779B97f4A7C15ULL;
        std::uint64_t z = seed;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    for (auto& s : s_) s = splitmix();
}

std::uint64_t Rng::next() {
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return (next() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    have_spare_ = true;
    spare_ = r * std::sin(2.0 * M_PI * u2);
    return r * std::cos(2.0 * M_PI * u2);
}

// ---- initial conditions ----------------------------------------------------------

SpectralField taylor_green_velocity(const GridPtr& grid, double amplitude) {
    PhysicalField u(grid, Rank::vector);
    const int n = grid->n;
    const double h = 2.0 * M_PI / grid->length;  // one full period across the box
    std::size_t p = 0;
    if (grid->dim == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++p) {
                double x = h * i * grid->dx(), y = h * j * grid->dx();
                u.at(0, p) = amplitude * std::sin(x) * std::cos(y);
                u.at(1, p) = -amplitude * std::cos(x) * std::sin(y);
            }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++p) {
                    double x = h * i * grid->dx(), y = h * j * grid->dx(), z = h * k * grid->dx();
                    u.at(0, p) = amplitude * std::sin(x) * std::cos(y) * std::cos(z);
                    u.at(1, p) = -amplitude * std::cos(x) * std::sin(y) * std::cos(z);
                    u.at(2, p) = 0.0;
                }
    }
    SpectralField s = fft::to_spectral(u);
    s = dealias(leray_project(s));
    zero_mean_mode(s);
    enforce_conjugate_symmetry(s);
    return s;
}

SpectralField random_solenoidal_velocity(const GridPtr& grid, double amplitude,
                                         double spectrum_slope, std::uint64_t seed) {
    Rng rng(seed);
    SpectralField u(grid, Rank::vector);
    const int lim = grid->dealias_limit();
    for (std::size_t m = 0; m < u.modes(); ++m) {
        auto k = grid->wavenumbers(m);
        double k2i = 0.0;
        bool keep = true;
        for (int a = 0; a < grid->dim; ++a) {
            if (std::abs(k[a]) > lim) keep = false;
            k2i += double(k[a]) * double(k[a]);
        }
        // fixed iteration order keeps the stream deterministic; draw for
        // every retained mode, including the mirrored halves
        if (!keep || k2i == 0.0) continue;
        double mag = std::pow(k2i, 0.5 * spectrum_slope);
        for (int c = 0; c < grid->dim; ++c)
            u.at(c, m) = mag * std::complex<double>(rng.gaussian(), rng.gaussian());
    }
    enforce_conjugate_symmetry(u);
    u = dealias(leray_project(u));
    zero_mean_mode(u);
    double norm = sobolev_norm(u, 0.0, NormConvention::velocity);
    if (norm > 0.0) u *= amplitude / norm;
    return u;
}

SpectralField constant_director(const GridPtr& grid, const std::vector<double>& vec) {
    if (static_cast<int>(vec.size()) != grid->dim)
        throw std::invalid_argument("constant_director: vector size must equal dim");
    SpectralField d(grid, Rank::vector);
    std::size_t m0 = grid->index_of({0, 0, 0});
    for (int c = 0; c < grid->dim; ++c) d.at(c, m0) = vec[c];
    return d;
}

SpectralField perturbed_constant_director(const GridPtr& grid, const std::vector<double>& vec,
                                          double amplitude, std::uint64_t seed) {
    SpectralField d = constant_director(grid, vec);
    Rng rng(seed);
    const int band = std::min(3, grid->dealias_limit());
    for (std::size_t m = 0; m < d.modes(); ++m) {
        auto k = grid->wavenumbers(m);
        double k2i = 0.0;
        bool low = true;
        for (int a = 0; a < grid->dim; ++a) {
            if (std::abs(k[a]) > band) low = false;
            k2i += double(k[a]) * double(k[a]);
        }
        if (!low || k2i == 0.0) continue;
        for (int c = 0; c < grid->dim; ++c)
            d.at(c, m) += amplitude * std::complex<double>(rng.gaussian(), rng.gaussian());
    }
    enforce_conjugate_symmetry(d);
    // normalize the perturbation amplitude in the max norm
    SpectralField base = constant_director(grid, vec);
    SpectralField pert = d - base;
    double mx = fft::to_physical(pert).max_pointwise_norm();
    if (mx > 0.0) pert *= amplitude / mx;
    return dealias(base + pert);
}

SpectralField random_unit_director(const GridPtr& grid, double amplitude, std::uint64_t seed) {
    Rng rng(seed);
    const int n = grid->n;
    // low-mode random phase perturbation on top of the winding 2 pi x0 / L
    const int nwaves = 4;
    std::vector<std::array<double, 5>> waves(nwaves);  // kx,ky,kz,amp,phase
    for (auto& w : waves) {
        w[0] = 1.0 + std::floor(rng.uniform() * 3.0);
        w[1] = std::floor(rng.uniform() * 3.0) - 1.0;
        w[2] = grid->dim == 3 ? std::floor(rng.uniform() * 3.0) - 1.0 : 0.0;
        w[3] = 0.05 + 0.05 * rng.uniform();
        w[4] = 2.0 * M_PI * rng.uniform();
    }
    PhysicalField d(grid, Rank::vector);
    const double b = 2.0 * M_PI / grid->length;
    std::size_t p = 0;
    auto phase = [&](double x, double y, double z) {
        double phi = b * x;
        for (const auto& w : waves)
            phi += w[3] * std::cos(b * (w[0] * x + w[1] * y + w[2] * z) + w[4]);
        return phi;
    };
    if (grid->dim == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++p) {
                double phi = phase(i * grid->dx(), j * grid->dx(), 0.0);
                d.at(0, p) = amplitude * std::cos(phi);
                d.at(1, p) = amplitude * std::sin(phi);
            }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++p) {
                    double phi = phase(i * grid->dx(), j * grid->dx(), k * grid->dx());
                    d.at(0, p) = amplitude * std::cos(phi);
                    d.at(1, p) = amplitude * std::sin(phi);
                    d.at(2, p) = 0.0;
                }
    }
    return dealias(fft::to_spectral(d));
}

std::pair<bool, double> max_principle_monitor(const SpectralField& d, double bound, double tol) {
    double mx = fft::to_physical(d).max_pointwise_norm();
    return {mx <= bound * (1.0 + tol), mx};
}

}  // namespace elreg
