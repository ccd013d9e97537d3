#pragma once

#include <vector>

#include "bll/field.hpp"

namespace bll {

// Spectral-space primitives. First derivatives use the derivative
// wavenumbers (Nyquist mode zeroed); the Laplacian uses the exact -|k|^2.
Spectrum derivative(const Spectrum& f, int axis);
Spectrum laplacian(const Spectrum& f);
Spectrum divergence(const std::vector<Spectrum>& v);

/// Zeroes every mode with some |m_i| > points/3.
Spectrum dealias(const Spectrum& f);
void dealias_in_place(Spectrum& f);
bool is_dealiased_mode(const Grid& g, const Mode& m);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);

/// One component (the scalar vorticity) in 2D, three components in 3D.
/// Throws ValidationError for dim 1.
std::vector<ScalarField> curl(const VectorField& v);
/// L2 norm of curl(v); zero in 1D where every field is a gradient.
double curl_norm(const VectorField& v);

/// Zero-mean phi with gradient(phi) = v.
/// Throws CurlNotZero when ||curl v|| > 1e-8 and NonzeroMean when some
/// component has |mean| > 1e-10.
ScalarField inverse_gradient_potential(const VectorField& v);

/// Copies every integer mode representable on `target` (same dim, any
/// size). Nyquist modes are dropped when the size changes. Warns when the
/// discarded modes carry more than 1% of the energy.
Spectrum resample_spectrum(const Spectrum& s, GridPtr target);

/// Product of two fields with the result's spectrum dealiased.
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b);

}  // namespace bll
