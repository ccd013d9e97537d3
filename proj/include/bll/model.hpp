#pragma once

#include <utility>
#include <vector>

#include "bll/field.hpp"

namespace bll {

/// Physical and model parameters. The solver evolves the normalised system
/// (chi = mu = D = 1); chi, mu, diff and sigma enter only through the
/// Cole-Hopf bridge, the rescaling and the characteristic speeds.
struct ModelParams {
    double epsilon = 0.0;
    double pbar = 1.0;
    double chi = 1.0;
    double mu = 1.0;
    double diff = 1.0;
    double sigma = 0.0;
    int dim = 1;

    /// Throws ValidationError naming every violated invariant.
    void validate() const;
};

/// Perturbation fields about (pbar, 0): full density is p + pbar.
struct State {
    ScalarField p;
    VectorField v;
    double time = 0.0;

    State() = default;
    State(ScalarField p_, VectorField v_, double t = 0.0);
    static State zero(GridPtr g);

    const GridPtr& grid() const { return p.grid; }
    double min_density(double pbar) const { return p.min() + pbar; }
    bool all_finite() const { return p.all_finite() && v.all_finite(); }
};

struct RescaleSpec {
    double time_factor = 1.0;
    double space_factor = 1.0;
    double v_factor = 1.0;
};

/// State in normalised Fourier coefficients.
struct SpectralState {
    Spectrum p;
    std::vector<Spectrum> v;
};

SpectralState to_spectral(const State& s);
State from_spectral(const SpectralState& s, double time);

struct RhsParts {
    ScalarField lin_p;   // Laplacian of p
    VectorField lin_v;   // epsilon * Laplacian of v
    ScalarField nl_p;    // div(p v) + pbar div v
    VectorField nl_v;    // grad p - epsilon grad |v|^2
};

/// Right-hand side split into the stiff linear part and the explicit flux.
/// With drop_quadratic the flux keeps only its linear terms.
RhsParts rhs(const State& s, const ModelParams& params, bool drop_quadratic = false);

/// Explicit flux in spectral space; quadratic products are dealiased.
SpectralState flux_tendency(const SpectralState& s, const ModelParams& params, bool drop_quadratic = false);

/// Characteristic speeds of the one-dimensional flux, lambda_minus <= lambda_plus.
std::pair<double, double> eigenvalues_1d(double P, double V, const ModelParams& params);

/// V = grad log c. The factor e^{sigma t} is constant in space and drops out.
VectorField cole_hopf_forward(const ScalarField& c, double sigma, double t);
/// c with grad log c = V and geometric mean c_ref * e^{-sigma t}.
ScalarField cole_hopf_inverse(const VectorField& V, double sigma, double t, double c_ref);

RescaleSpec rescale_to_clean(const ModelParams& params);

/// The scaling (xi^2 p(xi x), xi v(xi x)) sampled on `target`, whose
/// length must equal the source length divided by xi. The scaled solution
/// at time tau matches the original at time xi^2 tau, so the returned
/// time is s.time / xi^2.
State scale_solution(const State& s, double xi, GridPtr target);
/// Parameters under which the scaled state solves the same system (pbar -> xi^2 pbar).
ModelParams scale_params(const ModelParams& params, double xi);

}  // namespace bll
