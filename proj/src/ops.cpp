#include "elreg/ops.hpp"

#include <cmath>

namespace elreg {

// ---- differentiation --------------------------------------------------------

SpectralField derivative(const SpectralField& f, int axis) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("derivative: axis out of range");
    SpectralField out(f.grid_ptr(), f.rank());
    const double scale = g.k_scale();
    const int nyq = -g.n / 2;
    for (int c = 0; c < f.ncomp(); ++c) {
        auto src = f.component(c);
        auto dst = out.component(c);
        for (std::size_t m = 0; m < f.modes(); ++m) {
            int k = g.wavenumbers(m)[axis];
            if (k == nyq) {
                dst[m] = 0.0;  // unpaired mode, keep the result real
            } else {
                dst[m] = std::complex<double>(0.0, k * scale) * src[m];
            }
        }
    }
    return out;
}

SpectralField velocity_gradient(const SpectralField& v) {
    if (v.rank() != Rank::vector) throw std::invalid_argument("velocity_gradient: vector rank required");
    const Grid& g = v.grid();
    SpectralField out(v.grid_ptr(), Rank::tensor);
    for (int i = 0; i < g.dim; ++i) {
        SpectralField vi(v.grid_ptr(), Rank::scalar);
        auto src = v.component(i);
        auto dst = vi.component(0);
        for (std::size_t m = 0; m < v.modes(); ++m) dst[m] = src[m];
        for (int j = 0; j < g.dim; ++j) {
            SpectralField d = derivative(vi, j);
            auto dc = d.component(0);
            auto oc = out.component(out.tidx(i, j));
            for (std::size_t m = 0; m < v.modes(); ++m) oc[m] = dc[m];
        }
    }
    return out;
}

SpectralField divergence(const SpectralField& tensor) {
    if (tensor.rank() != Rank::tensor) throw std::invalid_argument("divergence: tensor rank required");
    const Grid& g = tensor.grid();
    SpectralField out(tensor.grid_ptr(), Rank::vector);
    const double scale = g.k_scale();
    const int nyq = -g.n / 2;
    for (int i = 0; i < g.dim; ++i) {
        auto oc = out.component(i);
        for (int j = 0; j < g.dim; ++j) {
            auto tc = tensor.component(tensor.tidx(i, j));
            for (std::size_t m = 0; m < tensor.modes(); ++m) {
                int k = g.wavenumbers(m)[j];
                if (k == nyq) continue;
                oc[m] += std::complex<double>(0.0, k * scale) * tc[m];
            }
        }
    }
    return out;
}

SpectralField divergence_vec(const SpectralField& v) {
    if (v.rank() != Rank::vector) throw std::invalid_argument("divergence_vec: vector rank required");
    const Grid& g = v.grid();
    SpectralField out(v.grid_ptr(), Rank::scalar);
    const double scale = g.k_scale();
    const int nyq = -g.n / 2;
    auto oc = out.component(0);
    for (int a = 0; a < g.dim; ++a) {
        auto vc = v.component(a);
        for (std::size_t m = 0; m < v.modes(); ++m) {
            int k = g.wavenumbers(m)[a];
            if (k == nyq) continue;
            oc[m] += std::complex<double>(0.0, k * scale) * vc[m];
        }
    }
    return out;
}

// ---- projections --------------------------------------------------------------

SpectralField leray_project(const SpectralField& vf) {
    if (vf.rank() != Rank::vector) throw std::invalid_argument("leray_project: vector rank required");
    const Grid& g = vf.grid();
    SpectralField out = vf;
    for (std::size_t m = 0; m < vf.modes(); ++m) {
        auto k = g.wavenumbers(m);
        double k2 = 0.0;
        for (int a = 0; a < g.dim; ++a) k2 += double(k[a]) * double(k[a]);
        if (k2 == 0.0) {
            for (int a = 0; a < g.dim; ++a) out.at(a, m) = 0.0;
            continue;
        }
        std::complex<double> kdotu(0.0, 0.0);
        for (int a = 0; a < g.dim; ++a) kdotu += double(k[a]) * vf.at(a, m);
        kdotu /= k2;
        for (int a = 0; a < g.dim; ++a) out.at(a, m) -= double(k[a]) * kdotu;
    }
    return out;
}

double divergence_residual(const SpectralField& vf) {
    const Grid& g = vf.grid();
    double worst = 0.0;
    for (std::size_t m = 0; m < vf.modes(); ++m) {
        auto k = g.wavenumbers(m);
        std::complex<double> kdotu(0.0, 0.0);
        for (int a = 0; a < g.dim; ++a) kdotu += double(k[a]) * vf.at(a, m);
        worst = std::max(worst, std::abs(kdotu) * g.k_scale());
    }
    return worst;
}

// ---- spectral multipliers -------------------------------------------------------

SymbolSpec SymbolSpec::lambda_pow(double s) { return {Kind::lambda_pow, s, 1.0, 1.0}; }
SymbolSpec SymbolSpec::a0(double theta, double mu4) { return {Kind::a0, theta, 1.0, mu4}; }
SymbolSpec SymbolSpec::helmholtz(double theta, double alpha) {
    return {Kind::helmholtz, theta, alpha, 1.0};
}
SymbolSpec SymbolSpec::inv_helmholtz(double theta, double alpha) {
    return {Kind::inv_helmholtz, theta, alpha, 1.0};
}
SymbolSpec SymbolSpec::a1_pow(double s) { return {Kind::a1_pow, s, 1.0, 1.0}; }

namespace {
// the preset exponents are all 0 or 1; keep those off the pow path
inline double fast_pow(double base, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return base;
    if (e == -1.0) return 1.0 / base;
    if (e == 2.0) return base * base;
    return std::pow(base, e);
}
}  // namespace

double SymbolSpec::eval(double k2) const {
    switch (kind) {
        case Kind::lambda_pow: return fast_pow(k2, 0.5 * s);
        case Kind::a0: return mu4 * fast_pow(k2, s);
        case Kind::helmholtz: return fast_pow(1.0 + alpha * alpha * k2, -s);
        case Kind::inv_helmholtz: return fast_pow(1.0 + alpha * alpha * k2, s);
        case Kind::a1_pow: return fast_pow(k2, s);
    }
    return 0.0;
}

bool SymbolSpec::needs_zero_mean() const {
    switch (kind) {
        case Kind::lambda_pow: return s < 0.0;
        case Kind::a1_pow: return s < 0.0;
        default: return false;
    }
}

double SymbolSpec::mean_value() const {
    // mean-zero convention for the Laplacian-power symbols, identity for
    // the Helmholtz filters
    switch (kind) {
        case Kind::helmholtz:
        case Kind::inv_helmholtz: return 1.0;
        case Kind::lambda_pow: return 0.0;  // mean mode always excluded
        case Kind::a0: return s == 0.0 ? mu4 : 0.0;
        case Kind::a1_pow: return s == 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

SpectralField apply_multiplier(const SpectralField& f, const SymbolSpec& sym) {
    const Grid& g = f.grid();
    if (sym.needs_zero_mean()) {
        for (int c = 0; c < f.ncomp(); ++c) {
            if (std::abs(f.at(c, g.index_of({0, 0, 0}))) > 0.0)
                throw std::invalid_argument(
                    "apply_multiplier: negative-power symbol on a field with nonzero mean");
        }
    }
    SpectralField out(f.grid_ptr(), f.rank());
    std::vector<double> symbol(f.modes());
    for (std::size_t m = 0; m < f.modes(); ++m) {
        double k2 = g.k2(m);
        symbol[m] = (k2 == 0.0) ? sym.mean_value() : sym.eval(k2);
    }
    for (int c = 0; c < f.ncomp(); ++c) {
        auto src = f.component(c);
        auto dst = out.component(c);
        for (std::size_t m = 0; m < f.modes(); ++m) dst[m] = symbol[m] * src[m];
    }
    return out;
}

// ---- norms and pairings -----------------------------------------------------------

double sobolev_norm(const SpectralField& f, double s, NormConvention conv) {
    const Grid& g = f.grid();
    if (conv == NormConvention::velocity && s < 0.0) {
        for (int c = 0; c < f.ncomp(); ++c)
            if (std::abs(f.at(c, g.index_of({0, 0, 0}))) > 0.0)
                throw std::invalid_argument("sobolev_norm: negative s requires zero mean (velocity)");
    }
    double acc = 0.0;
    for (std::size_t m = 0; m < f.modes(); ++m) {
        double k2 = g.k2(m);
        double w;
        if (conv == NormConvention::velocity) {
            if (k2 == 0.0) continue;
            w = std::pow(k2, s);
        } else {
            w = std::pow(1.0 + k2, s);
        }
        double a2 = 0.0;
        for (int c = 0; c < f.ncomp(); ++c) a2 += std::norm(f.at(c, m));
        acc += w * a2;
    }
    return std::sqrt(g.volume() * acc);
}

double inner_product(const SpectralField& f, const SpectralField& g) {
    f.check_same_layout(g);
    double acc = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) {
        auto a = f.component(c);
        auto b = g.component(c);
        for (std::size_t m = 0; m < f.modes(); ++m)
            acc += a[m].real() * b[m].real() + a[m].imag() * b[m].imag();
    }
    return f.grid().volume() * acc;
}

// ---- dealiasing and symmetry --------------------------------------------------------

SpectralField dealias(const SpectralField& f) {
    const Grid& g = f.grid();
    const int lim = g.dealias_limit();
    SpectralField out = f;
    for (std::size_t m = 0; m < f.modes(); ++m) {
        auto k = g.wavenumbers(m);
        bool kill = false;
        for (int a = 0; a < g.dim; ++a)
            if (std::abs(k[a]) > lim) kill = true;
        if (kill)
            for (int c = 0; c < f.ncomp(); ++c) out.at(c, m) = 0.0;
    }
    return out;
}

void enforce_conjugate_symmetry(SpectralField& f) {
    const Grid& g = f.grid();
    for (std::size_t m = 0; m < f.modes(); ++m) {
        auto k = g.wavenumbers(m);
        std::array<int, 3> nk{};
        bool self = true;
        for (int a = 0; a < g.dim; ++a) {
            nk[a] = (k[a] == -g.n / 2) ? k[a] : -k[a];
            if (nk[a] != k[a]) self = false;
        }
        std::size_t mm = g.index_of(nk);
        if (self) {
            for (int c = 0; c < f.ncomp(); ++c) f.at(c, m) = f.at(c, m).real();
        } else if (mm > m) {
            for (int c = 0; c < f.ncomp(); ++c) {
                auto avg = 0.5 * (f.at(c, m) + std::conj(f.at(c, mm)));
                f.at(c, m) = avg;
                f.at(c, mm) = std::conj(avg);
            }
        }
    }
}

void zero_mean_mode(SpectralField& f) {
    std::size_t m0 = f.grid().index_of({0, 0, 0});
    for (int c = 0; c < f.ncomp(); ++c) f.at(c, m0) = 0.0;
}

// ---- pointwise products ----------------------------------------------------------------

namespace prod {

namespace {
PhysicalField padded(const SpectralField& f) {
    return fft::to_physical(f, fft::padded_grid(f.grid()));
}
}  // namespace

SpectralField scalar_times(const SpectralField& s, const SpectralField& f) {
    if (s.rank() != Rank::scalar) throw std::invalid_argument("scalar_times: scalar rank required");
    if (!(s.grid() == f.grid())) throw std::invalid_argument("scalar_times: grid mismatch");
    PhysicalField sp = padded(s), fp = padded(f);
    PhysicalField out(sp.grid_ptr(), f.rank());
    for (int c = 0; c < f.ncomp(); ++c)
        for (std::size_t p = 0; p < sp.points(); ++p)
            out.at(c, p) = sp.at(0, p) * fp.at(c, p);
    return fft::to_spectral(out, f.grid_ptr());
}

SpectralField dot(const SpectralField& a, const SpectralField& b) {
    if (a.rank() != Rank::vector || b.rank() != Rank::vector)
        throw std::invalid_argument("dot: vector ranks required");
    if (!(a.grid() == b.grid())) throw std::invalid_argument("dot: grid mismatch");
    PhysicalField ap = padded(a), bp = padded(b);
    PhysicalField out(ap.grid_ptr(), Rank::scalar);
    for (std::size_t p = 0; p < ap.points(); ++p) {
        double s = 0.0;
        for (int c = 0; c < a.ncomp(); ++c) s += ap.at(c, p) * bp.at(c, p);
        out.at(0, p) = s;
    }
    return fft::to_spectral(out, a.grid_ptr());
}

SpectralField matvec(const SpectralField& t, const SpectralField& v) {
    if (t.rank() != Rank::tensor || v.rank() != Rank::vector)
        throw std::invalid_argument("matvec: tensor and vector ranks required");
    if (!(t.grid() == v.grid())) throw std::invalid_argument("matvec: grid mismatch");
    const int dim = t.grid().dim;
    PhysicalField tp = padded(t), vp = padded(v);
    PhysicalField out(tp.grid_ptr(), Rank::vector);
    for (std::size_t p = 0; p < tp.points(); ++p)
        for (int i = 0; i < dim; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim; ++j) s += tp.at(tp.tidx(i, j), p) * vp.at(j, p);
            out.at(i, p) = s;
        }
    return fft::to_spectral(out, v.grid_ptr());
}

SpectralField outer(const SpectralField& a, const SpectralField& b) {
    if (a.rank() != Rank::vector || b.rank() != Rank::vector)
        throw std::invalid_argument("outer: vector ranks required");
    if (!(a.grid() == b.grid())) throw std::invalid_argument("outer: grid mismatch");
    const int dim = a.grid().dim;
    PhysicalField ap = padded(a), bp = padded(b);
    PhysicalField out(ap.grid_ptr(), Rank::tensor);
    for (std::size_t p = 0; p < ap.points(); ++p)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out.at(out.tidx(i, j), p) = ap.at(i, p) * bp.at(j, p);
    return fft::to_spectral(out, a.grid_ptr());
}

SpectralField advect(const SpectralField& v, const SpectralField& f) {
    if (v.rank() != Rank::vector) throw std::invalid_argument("advect: vector advecting field");
    if (!(v.grid() == f.grid())) throw std::invalid_argument("advect: grid mismatch");
    const int dim = v.grid().dim;
    PhysicalField vp = padded(v);
    PhysicalField out(vp.grid_ptr(), f.rank());
    for (int c = 0; c < f.ncomp(); ++c) {
        SpectralField fc(f.grid_ptr(), Rank::scalar);
        auto src = f.component(c);
        auto dst = fc.component(0);
        for (std::size_t m = 0; m < f.modes(); ++m) dst[m] = src[m];
        for (int a = 0; a < dim; ++a) {
            PhysicalField dfa = fft::to_physical(derivative(fc, a), vp.grid_ptr());
            for (std::size_t p = 0; p < vp.points(); ++p)
                out.at(c, p) += vp.at(a, p) * dfa.at(0, p);
        }
    }
    return fft::to_spectral(out, f.grid_ptr());
}

SpectralField grad_weighted(const SpectralField& psi, const SpectralField& d) {
    if (psi.rank() != Rank::vector || d.rank() != Rank::vector)
        throw std::invalid_argument("grad_weighted: vector ranks required");
    if (!(psi.grid() == d.grid())) throw std::invalid_argument("grad_weighted: grid mismatch");
    const int dim = d.grid().dim;
    PhysicalField pp = padded(psi);
    PhysicalField out(pp.grid_ptr(), Rank::vector);
    for (int j = 0; j < dim; ++j) {
        SpectralField dj(d.grid_ptr(), Rank::scalar);
        auto src = d.component(j);
        auto dst = dj.component(0);
        for (std::size_t m = 0; m < d.modes(); ++m) dst[m] = src[m];
        for (int i = 0; i < dim; ++i) {
            PhysicalField g = fft::to_physical(derivative(dj, i), pp.grid_ptr());
            for (std::size_t p = 0; p < pp.points(); ++p)
                out.at(i, p) += pp.at(j, p) * g.at(0, p);
        }
    }
    return fft::to_spectral(out, d.grid_ptr());
}

}  // namespace prod

double integrate(const PhysicalField& f) {
    if (f.rank() != Rank::scalar) throw std::invalid_argument("integrate: scalar rank required");
    double acc = 0.0;
    for (double v : f.component(0)) acc += v;
    return acc * f.grid().cell_volume();
}

}  // namespace elreg
