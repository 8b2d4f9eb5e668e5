#pragma once

#include <complex>
#include <cstdlib>
#include <new>
#include <span>
#include <stdexcept>
#include <vector>

#include "elreg/grid.hpp"

namespace elreg {

// 64-byte aligned storage so the FFT backend can use its aligned codelets
template <class T>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) {}

    T* allocate(std::size_t n) {
        void* p = nullptr;
        if (posix_memalign(&p, 64, std::max<std::size_t>(n, 1) * sizeof(T)) != 0)
            throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { std::free(p); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const {
        return true;
    }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

enum class Rank { scalar, vector, tensor };

inline int rank_components(Rank r, int dim) {
    switch (r) {
        case Rank::scalar: return 1;
        case Rank::vector: return dim;
        case Rank::tensor: return dim * dim;
    }
    return 0;
}

// Fourier coefficients of a real field on the torus, stored component-major
// in FFT index order. Convention: f(x) = sum_k fhat_k exp(i k.x), so real
// fields obey fhat(-k) = conj(fhat(k)).
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(GridPtr grid, Rank rank)
        : grid_(std::move(grid)),
          rank_(rank),
          ncomp_(rank_components(rank, grid_->dim)),
          coeffs_(static_cast<std::size_t>(ncomp_) * grid_->total()) {}

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    Rank rank() const { return rank_; }
    int ncomp() const { return ncomp_; }
    std::size_t modes() const { return grid_->total(); }

    std::complex<double>& at(int comp, std::size_t mode) {
        return coeffs_[static_cast<std::size_t>(comp) * modes() + mode];
    }
    const std::complex<double>& at(int comp, std::size_t mode) const {
        return coeffs_[static_cast<std::size_t>(comp) * modes() + mode];
    }
    std::span<std::complex<double>> component(int comp) {
        return {coeffs_.data() + static_cast<std::size_t>(comp) * modes(), modes()};
    }
    std::span<const std::complex<double>> component(int comp) const {
        return {coeffs_.data() + static_cast<std::size_t>(comp) * modes(), modes()};
    }
    AlignedVector<std::complex<double>>& raw() { return coeffs_; }
    const AlignedVector<std::complex<double>>& raw() const { return coeffs_; }

    // tensor component (i,j) index
    int tidx(int i, int j) const { return i * grid_->dim + j; }

    SpectralField& operator+=(const SpectralField& o) {
        check_same_layout(o);
        for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += o.coeffs_[m];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        check_same_layout(o);
        for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] -= o.coeffs_[m];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& c : coeffs_) c *= a;
        return *this;
    }
    // this += a*o
    SpectralField& axpy(double a, const SpectralField& o) {
        check_same_layout(o);
        for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += a * o.coeffs_[m];
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    bool all_finite() const {
        for (const auto& c : coeffs_)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        return true;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    void check_same_layout(const SpectralField& o) const {
        if (!(grid() == o.grid()) || rank_ != o.rank_)
            throw std::invalid_argument("SpectralField: layout mismatch");
    }

  private:
    GridPtr grid_;
    Rank rank_ = Rank::scalar;
    int ncomp_ = 0;
    AlignedVector<std::complex<double>> coeffs_;
};

// Real values on the grid points, component-major, row-major in space.
class PhysicalField {
  public:
    PhysicalField() = default;
    PhysicalField(GridPtr grid, Rank rank)
        : grid_(std::move(grid)),
          rank_(rank),
          ncomp_(rank_components(rank, grid_->dim)),
          values_(static_cast<std::size_t>(ncomp_) * grid_->total()) {}

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    Rank rank() const { return rank_; }
    int ncomp() const { return ncomp_; }
    std::size_t points() const { return grid_->total(); }

    double& at(int comp, std::size_t p) {
        return values_[static_cast<std::size_t>(comp) * points() + p];
    }
    double at(int comp, std::size_t p) const {
        return values_[static_cast<std::size_t>(comp) * points() + p];
    }
    std::span<double> component(int comp) {
        return {values_.data() + static_cast<std::size_t>(comp) * points(), points()};
    }
    std::span<const double> component(int comp) const {
        return {values_.data() + static_cast<std::size_t>(comp) * points(), points()};
    }
    AlignedVector<double>& raw() { return values_; }
    const AlignedVector<double>& raw() const { return values_; }

    int tidx(int i, int j) const { return i * grid_->dim + j; }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    // max over grid points of the euclidean norm across components
    double max_pointwise_norm() const {
        double m = 0.0;
        for (std::size_t p = 0; p < points(); ++p) {
            double s = 0.0;
            for (int c = 0; c < ncomp_; ++c) s += at(c, p) * at(c, p);
            m = std::max(m, s);
        }
        return std::sqrt(m);
    }

  private:
    GridPtr grid_;
    Rank rank_ = Rank::scalar;
    int ncomp_ = 0;
    AlignedVector<double> values_;
};

}  // namespace elreg
