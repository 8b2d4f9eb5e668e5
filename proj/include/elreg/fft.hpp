#pragma once

#include "elreg/field.hpp"
#include "elreg/grid.hpp"

namespace elreg::fft {

// Forward transform of real point values into coefficients of
// f(x) = sum_k fhat_k exp(i k.x). Throws on non-finite input.
SpectralField to_spectral(const PhysicalField& f);

// Forward transform followed by truncation to a coarser target grid
// (modes outside the target band are dropped).
SpectralField to_spectral(const PhysicalField& f, const GridPtr& target);

// Inverse transform onto the field's own grid.
PhysicalField to_physical(const SpectralField& f);

// Inverse transform onto a finer grid with n_out >= n modes per axis
// (zero padding; exact evaluation of the trigonometric polynomial).
PhysicalField to_physical(const SpectralField& f, const GridPtr& fine);

// Grid with 3/2 resolution per axis, used for alias-free quadratic products.
GridPtr padded_grid(const Grid& g);

}  // namespace elreg::fft
