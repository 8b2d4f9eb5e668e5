#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace elreg {

// Uniform periodic grid on [0,L)^dim with the same even number of modes per
// axis. Integer wavenumbers per axis run over [-n/2, n/2); physical
// wavenumbers carry the 2*pi/L scale.
struct Grid {
    int dim = 2;          // 2 or 3
    int n = 0;            // modes per axis, even, >= 8
    double length = 2.0 * M_PI;

    Grid() = default;
    Grid(int dim_, int n_, double length_) : dim(dim_), n(n_), length(length_) {
        if (dim < 2 || dim > 3) throw std::invalid_argument("Grid: dim must be 2 or 3");
        if (n < 8 || n % 2 != 0) throw std::invalid_argument("Grid: n_modes must be even and >= 8");
        if (!(length > 0.0)) throw std::invalid_argument("Grid: length must be positive");
        build_tables();
    }

    std::size_t total() const {
        std::size_t t = 1;
        for (int a = 0; a < dim; ++a) t *= static_cast<std::size_t>(n);
        return t;
    }

    double k_scale() const { return 2.0 * M_PI / length; }
    double dx() const { return length / n; }
    double cell_volume() const { return std::pow(length / n, dim); }
    double volume() const { return std::pow(length, dim); }

    // integer wavenumber of array index i on one axis (FFT storage order)
    int fold(int i) const { return i < n / 2 ? i : i - n; }

    // integer wavenumber tuple of a flat (row-major) mode index
    const std::array<int, 3>& wavenumbers(std::size_t flat) const { return kv_[flat]; }

    // flat index of an integer wavenumber tuple (must be representable)
    std::size_t index_of(const std::array<int, 3>& k) const {
        std::size_t flat = 0;
        for (int a = 0; a < dim; ++a) {
            int i = k[a] >= 0 ? k[a] : k[a] + n;
            flat = flat * n + static_cast<std::size_t>(i);
        }
        return flat;
    }

    bool representable(const std::array<int, 3>& k) const {
        for (int a = 0; a < dim; ++a)
            if (k[a] < -n / 2 || k[a] >= n / 2) return false;
        return true;
    }

    // |k|^2 in physical units for a flat mode index
    double k2(std::size_t flat) const { return k2_[flat]; }

    // 2/3-rule band limit: retained modes satisfy |k_axis| <= n/3 on all axes
    int dealias_limit() const { return n / 3; }

    bool operator==(const Grid& o) const {
        return dim == o.dim && n == o.n && length == o.length;
    }

  private:
    // per-mode tables; the per-step loops over all modes stay free of
    // integer division
    std::vector<std::array<int, 3>> kv_;
    std::vector<double> k2_;

    void build_tables() {
        const std::size_t tot = total();
        kv_.resize(tot);
        k2_.resize(tot);
        const double s2 = k_scale() * k_scale();
        for (std::size_t m = 0; m < tot; ++m) {
            std::array<int, 3> k{0, 0, 0};
            std::size_t flat = m;
            for (int a = dim - 1; a >= 0; --a) {
                k[a] = fold(static_cast<int>(flat % n));
                flat /= n;
            }
            kv_[m] = k;
            double r = 0.0;
            for (int a = 0; a < dim; ++a) r += double(k[a]) * double(k[a]);
            k2_[m] = r * s2;
        }
    }
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(int dim, int n, double length = 2.0 * M_PI) {
    return std::make_shared<const Grid>(dim, n, length);
}

}  // namespace elreg
