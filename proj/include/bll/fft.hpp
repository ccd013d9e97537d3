#pragma once

#include "bll/field.hpp"

namespace bll {

/// Real-to-complex transform, normalised so that the zero mode is the mean.
Spectrum forward(const ScalarField& f);
/// Inverse of forward(). The input spectrum is treated as Hermitian.
ScalarField inverse(const Spectrum& s);

/// Raw-buffer variants used by the time stepper. `out` must hold
/// grid.spectral_size() (forward) or grid.size() (inverse) entries.
void forward_into(const Grid& g, const double* in, Complex* out);
void inverse_into(const Grid& g, const Complex* in, double* out);

}  // namespace bll
