#include "elreg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace elreg::fft {

namespace {

// Plan cache keyed by (dim, n, sign). Plans are created on 64-byte aligned
// scratch and executed on equally aligned field buffers; execution via
// fftw_execute_dft is thread-safe, planning is serialized. ESTIMATE keeps
// plan selection (and hence rounding) reproducible across runs.
struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    fftw_plan get(int dim, int n, int sign) {
        std::scoped_lock lock(mu);
        auto key = std::make_tuple(dim, n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;

        std::vector<int> dims(dim, n);
        std::size_t total = 1;
        for (int a = 0; a < dim; ++a) total *= n;
        AlignedVector<std::complex<double>> scratch(total);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan p = fftw_plan_dft(dim, dims.data(), buf, buf, sign, FFTW_ESTIMATE);
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(int dim, int n, int sign, std::complex<double>* data) {
    fftw_plan p = cache().get(dim, n, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, buf, buf);
}

// coarse flat index -> fine flat index at matching integer wavenumbers
struct RemapCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, std::vector<std::size_t>> maps;

    const std::vector<std::size_t>& get(const Grid& coarse, const Grid& fine) {
        std::scoped_lock lock(mu);
        auto key = std::make_tuple(coarse.dim, coarse.n, fine.n);
        auto it = maps.find(key);
        if (it != maps.end()) return it->second;
        std::vector<std::size_t> map(coarse.total());
        for (std::size_t m = 0; m < coarse.total(); ++m)
            map[m] = fine.index_of(coarse.wavenumbers(m));
        return maps.emplace(key, std::move(map)).first->second;
    }
};

RemapCache& remaps() {
    static RemapCache r;
    return r;
}

struct PaddedGridCache {
    std::mutex mu;
    std::map<std::tuple<int, int, double>, GridPtr> grids;

    GridPtr get(const Grid& g) {
        std::scoped_lock lock(mu);
        auto key = std::make_tuple(g.dim, g.n, g.length);
        auto it = grids.find(key);
        if (it != grids.end()) return it->second;
        int m = 3 * g.n / 2;
        if (m % 2 != 0) ++m;
        auto ptr = std::make_shared<const Grid>(g.dim, m, g.length);
        grids.emplace(key, ptr);
        return ptr;
    }
};

PaddedGridCache& padded_grids() {
    static PaddedGridCache p;
    return p;
}

}  // namespace

GridPtr padded_grid(const Grid& g) { return padded_grids().get(g); }

SpectralField to_spectral(const PhysicalField& f) {
    return to_spectral(f, f.grid_ptr());
}

SpectralField to_spectral(const PhysicalField& f, const GridPtr& target) {
    if (!f.all_finite()) throw std::invalid_argument("to_spectral: non-finite input");
    const Grid& g = f.grid();
    if (target->dim != g.dim || target->length != g.length || target->n > g.n)
        throw std::invalid_argument("to_spectral: incompatible target grid");

    SpectralField out(target, f.rank());
    const std::size_t total = g.total();
    const double norm = 1.0 / static_cast<double>(total);
    AlignedVector<std::complex<double>> buf(total);
    for (int c = 0; c < f.ncomp(); ++c) {
        auto vals = f.component(c);
        for (std::size_t p = 0; p < total; ++p) buf[p] = vals[p];
        execute(g.dim, g.n, FFTW_FORWARD, buf.data());
        auto dst = out.component(c);
        if (target->n == g.n) {
            for (std::size_t p = 0; p < total; ++p) dst[p] = norm * buf[p];
        } else {
            const auto& map = remaps().get(*target, g);
            for (std::size_t m = 0; m < map.size(); ++m) dst[m] = norm * buf[map[m]];
        }
    }
    return out;
}

PhysicalField to_physical(const SpectralField& f) {
    return to_physical(f, f.grid_ptr());
}

PhysicalField to_physical(const SpectralField& f, const GridPtr& fine) {
    const Grid& g = f.grid();
    if (fine->dim != g.dim || fine->length != g.length || fine->n < g.n)
        throw std::invalid_argument("to_physical: incompatible output grid");

    PhysicalField out(fine, f.rank());
    const std::size_t total = fine->total();
    AlignedVector<std::complex<double>> buf(total);
    for (int c = 0; c < f.ncomp(); ++c) {
        auto src = f.component(c);
        if (fine->n == g.n) {
            for (std::size_t p = 0; p < total; ++p) buf[p] = src[p];
        } else {
            std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
            const auto& map = remaps().get(g, *fine);
            for (std::size_t m = 0; m < map.size(); ++m) buf[map[m]] = src[m];
        }
        // unnormalized backward transform evaluates sum_k fhat_k exp(i k.x)
        execute(fine->dim, fine->n, FFTW_BACKWARD, buf.data());
        auto dst = out.component(c);
        for (std::size_t p = 0; p < total; ++p) dst[p] = buf[p].real();
    }
    return out;
}

}  // namespace elreg::fft
