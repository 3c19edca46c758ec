#pragma once

// CSV exchange formats: spectra (l,C_l), coefficients (l,m,re,im; m >= 0 only)
// and grids (theta,phi,value). Doubles are written with 17 significant digits
// so a write/read cycle is lossless.

#include <iosfwd>
#include <string>

#include "spherefield/field.hpp"

namespace spherefield {

void write_spectrum_csv(std::ostream& out, const AngularPowerSpectrum& spectrum);
AngularPowerSpectrum read_spectrum_csv(std::istream& in);
AngularPowerSpectrum read_spectrum_csv(const std::string& path);

void write_coefficients_csv(std::ostream& out, const HarmonicCoefficients& coeffs);
/// Negative orders are rebuilt from the symmetry relation.
HarmonicCoefficients read_coefficients_csv(std::istream& in);

void write_grid_csv(std::ostream& out, const FieldGrid& grid);

/// printf("%.17g").
std::string format_double(double v);

}  // namespace spherefield
