#include "elreg/el_terms.hpp"

#include <cmath>

namespace elreg {

SpectralField rate_of_strain(const SpectralField& v) {
    SpectralField g = velocity_gradient(v);
    const int dim = v.grid().dim;
    SpectralField out(v.grid_ptr(), Rank::tensor);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            auto a = g.component(g.tidx(i, j));
            auto b = g.component(g.tidx(j, i));
            auto o = out.component(out.tidx(i, j));
            for (std::size_t m = 0; m < v.modes(); ++m) o[m] = 0.5 * (a[m] + b[m]);
        }
    return out;
}

SpectralField vorticity_skew(const SpectralField& v) {
    SpectralField g = velocity_gradient(v);
    const int dim = v.grid().dim;
    SpectralField out(v.grid_ptr(), Rank::tensor);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            auto a = g.component(g.tidx(i, j));
            auto b = g.component(g.tidx(j, i));
            auto o = out.component(out.tidx(i, j));
            for (std::size_t m = 0; m < v.modes(); ++m) o[m] = 0.5 * (a[m] - b[m]);
        }
    return out;
}

SpectralField n_q_substituted(const SpectralField& d, const SpectralField& a_q,
                              const LeslieCoefficients& leslie) {
    const double l1 = leslie.lambda1();
    if (l1 >= 0.0) throw std::invalid_argument("n_q_substituted: lambda1 must be < 0");
    const double l2 = leslie.lambda2();

    SpectralField a1d = apply_multiplier(d, SymbolSpec::a1_pow(1.0));
    GinzburgLandau gl = ginzburg_landau_force(d);
    SpectralField n = a1d;
    n += gl.force;
    n *= 1.0 / l1;
    if (l2 != 0.0) n.axpy(-l2 / l1, prod::matvec(a_q, d));
    return dealias(n);
}

SpectralField leslie_stress(const SpectralField& d, const SpectralField& a_q,
                            const SpectralField& n_q, const LeslieCoefficients& leslie) {
    if (d.rank() != Rank::vector || n_q.rank() != Rank::vector || a_q.rank() != Rank::tensor)
        throw std::invalid_argument("leslie_stress: rank mismatch");
    const int dim = d.grid().dim;
    GridPtr pad = fft::padded_grid(d.grid());
    PhysicalField dp = fft::to_physical(d, pad);
    PhysicalField ap = fft::to_physical(a_q, pad);
    PhysicalField np = fft::to_physical(n_q, pad);

    PhysicalField out(pad, Rank::tensor);
    std::vector<double> ad(dim);
    for (std::size_t p = 0; p < dp.points(); ++p) {
        double s = 0.0;  // d^T A d
        for (int i = 0; i < dim; ++i) {
            double r = 0.0;
            for (int j = 0; j < dim; ++j) r += ap.at(ap.tidx(i, j), p) * dp.at(j, p);
            ad[i] = r;
            s += dp.at(i, p) * r;
        }
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double v = leslie.mu1 * s * dp.at(i, p) * dp.at(j, p) +
                           leslie.mu2 * np.at(i, p) * dp.at(j, p) +
                           leslie.mu3 * dp.at(i, p) * np.at(j, p) +
                           leslie.mu5 * ad[i] * dp.at(j, p) +
                           leslie.mu6 * dp.at(i, p) * ad[j];
                out.at(out.tidx(i, j), p) = v;
            }
    }
    return dealias(fft::to_spectral(out, d.grid_ptr()));
}

SpectralField ericksen_force(const SpectralField& d) {
    if (d.rank() != Rank::vector) throw std::invalid_argument("ericksen_force: vector rank required");
    SpectralField a1d = apply_multiplier(d, SymbolSpec::a1_pow(1.0));
    return prod::grad_weighted(a1d, d);
}

SpectralField ericksen_force_div_form(const SpectralField& d) {
    const int dim = d.grid().dim;
    GridPtr pad = fft::padded_grid(d.grid());
    // grad d (.) grad d, entry (i,j) = (d_i d) . (d_j d), on the padded grid
    std::vector<PhysicalField> grads;
    grads.reserve(dim);
    for (int a = 0; a < dim; ++a) grads.push_back(fft::to_physical(derivative(d, a), pad));
    PhysicalField t(pad, Rank::tensor);
    for (std::size_t p = 0; p < t.points(); ++p)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double s = 0.0;
                for (int m = 0; m < dim; ++m) s += grads[i].at(m, p) * grads[j].at(m, p);
                t.at(t.tidx(i, j), p) = s;
            }
    SpectralField ts = fft::to_spectral(t, d.grid_ptr());
    SpectralField out = divergence(ts);
    out *= -1.0;
    return out;
}

SpectralField b0_nonlinear(const SpectralField& u, const ModelParams& params) {
    if (params.chi != 0 && params.chi != 1) throw std::invalid_argument("b0_nonlinear: invalid chi");
    SpectralField mu = apply_multiplier(u, params.m_spec());
    SpectralField qu = apply_multiplier(u, params.q_spec());
    SpectralField b = prod::advect(mu, qu);
    if (params.chi == 1) {
        if (params.chi_transpose_m)
            b += prod::grad_weighted(qu, mu);
        else
            b += prod::grad_weighted(mu, qu);
    }
    return dealias(leray_project(b));
}

SpectralField b1_transport(const SpectralField& u, const SpectralField& d,
                           const ModelParams& params) {
    SpectralField qu = apply_multiplier(u, params.q_spec());
    return dealias(prod::advect(qu, d));
}

GinzburgLandau ginzburg_landau_force(const SpectralField& d) {
    if (d.rank() != Rank::vector) throw std::invalid_argument("ginzburg_landau_force: vector rank");
    const int dim = d.grid().dim;
    GridPtr pad = fft::padded_grid(d.grid());
    PhysicalField dp = fft::to_physical(d, pad);
    PhysicalField force(pad, Rank::vector);
    double pot = 0.0;
    for (std::size_t p = 0; p < dp.points(); ++p) {
        double r2 = 0.0;
        for (int c = 0; c < dim; ++c) r2 += dp.at(c, p) * dp.at(c, p);
        double s = r2 - 1.0;
        for (int c = 0; c < dim; ++c) force.at(c, p) = s * dp.at(c, p);
        pot += 0.25 * s * s;
    }
    pot *= pad->cell_volume();
    return {dealias(fft::to_spectral(force, d.grid_ptr())), pot};
}

namespace {

// quadrature of a dot product of two padded physical vectors
double quad_dot(const PhysicalField& a, const PhysicalField& b) {
    double acc = 0.0;
    for (int c = 0; c < a.ncomp(); ++c) {
        auto x = a.component(c);
        auto y = b.component(c);
        for (std::size_t p = 0; p < a.points(); ++p) acc += x[p] * y[p];
    }
    return acc * a.grid().cell_volume();
}

}  // namespace

double trilinear_b0(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                    const ModelParams& params) {
    GridPtr pad = fft::padded_grid(u.grid());
    const int dim = u.grid().dim;
    SpectralField mu = apply_multiplier(u, params.m_spec());
    SpectralField qv = apply_multiplier(v, params.q_spec());
    PhysicalField mup = fft::to_physical(mu, pad);
    PhysicalField wp = fft::to_physical(w, pad);

    // (Mu.grad)(Qv) and optionally sum_j (Mu)_j grad (Qv)_j, accumulated
    // directly on the padded grid
    PhysicalField b(pad, Rank::vector);
    for (int c = 0; c < dim; ++c) {
        SpectralField qvc(v.grid_ptr(), Rank::scalar);
        auto src = qv.component(c);
        auto dst = qvc.component(0);
        for (std::size_t m = 0; m < v.modes(); ++m) dst[m] = src[m];
        for (int a = 0; a < dim; ++a) {
            PhysicalField g = fft::to_physical(derivative(qvc, a), pad);
            for (std::size_t p = 0; p < b.points(); ++p) {
                b.at(c, p) += mup.at(a, p) * g.at(0, p);
                if (params.chi == 1 && !params.chi_transpose_m)
                    b.at(a, p) += mup.at(c, p) * g.at(0, p);
            }
        }
    }
    if (params.chi == 1 && params.chi_transpose_m) {
        PhysicalField qvp = fft::to_physical(qv, pad);
        for (int c = 0; c < dim; ++c) {
            SpectralField muc(u.grid_ptr(), Rank::scalar);
            auto src = mu.component(c);
            auto dst = muc.component(0);
            for (std::size_t m = 0; m < u.modes(); ++m) dst[m] = src[m];
            for (int a = 0; a < dim; ++a) {
                PhysicalField g = fft::to_physical(derivative(muc, a), pad);
                for (std::size_t p = 0; p < b.points(); ++p)
                    b.at(a, p) += qvp.at(c, p) * g.at(0, p);
            }
        }
    }
    return quad_dot(b, wp);
}

double trilinear_b1(const SpectralField& u, const SpectralField& psi, const SpectralField& phi,
                    const ModelParams& params) {
    GridPtr pad = fft::padded_grid(u.grid());
    const int dim = u.grid().dim;
    SpectralField qu = apply_multiplier(u, params.q_spec());
    PhysicalField qup = fft::to_physical(qu, pad);
    PhysicalField phip = fft::to_physical(phi, pad);
    double acc = 0.0;
    for (int c = 0; c < psi.ncomp(); ++c) {
        SpectralField pc(psi.grid_ptr(), Rank::scalar);
        auto src = psi.component(c);
        auto dst = pc.component(0);
        for (std::size_t m = 0; m < psi.modes(); ++m) dst[m] = src[m];
        for (int a = 0; a < dim; ++a) {
            PhysicalField g = fft::to_physical(derivative(pc, a), pad);
            for (std::size_t p = 0; p < qup.points(); ++p)
                acc += qup.at(a, p) * g.at(0, p) * phip.at(c, p);
        }
    }
    return acc * pad->cell_volume();
}

StressTensors assemble_stresses(const SpectralField& u, const SpectralField& d,
                                const ModelParams& params, const LeslieCoefficients& leslie) {
    SpectralField v = apply_multiplier(u, params.q_spec());
    StressTensors st{rate_of_strain(v), vorticity_skew(v), SpectralField{}, SpectralField{}};
    st.n_q = n_q_substituted(d, st.a_q, leslie);
    st.sigma_q = leslie_stress(d, st.a_q, st.n_q, leslie);
    return st;
}

}  // namespace elreg
