#pragma once

#include <limits>

#include "bll/field.hpp"

namespace bll {

/// L2 norm from the spectrum (Parseval).
double norm_l2(const Spectrum& s);
double norm_l2(const ScalarField& f);
double norm_l2(const VectorField& v);
/// L2 norm by node quadrature; used as an independent cross-check.
double norm_l2_quadrature(const ScalarField& f);

/// sqrt(sum over multi-indices |alpha| <= k of ||d^alpha f||^2), k in 1..3.
/// Warns when more than 1% of the energy sits in the top third of the spectrum.
double norm_hk(const ScalarField& f, int k);
double norm_hk(const VectorField& v, int k);

/// Node-quadrature L^p norm; p = infinity gives the max-norm.
double norm_lp(const ScalarField& f, double p);
double norm_lp(const VectorField& v, double p);  // of the pointwise magnitude

/// Integral by node quadrature.
double integrate(const ScalarField& f);

/// Fraction of spectral energy carried by modes removed by dealiasing.
double tail_energy_fraction(const Spectrum& s);

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace bll
