#include "bll/model.hpp"

#include <cmath>
#include <sstream>

#include "bll/errors.hpp"
#include "bll/fft.hpp"
#include "bll/spectral_ops.hpp"

namespace bll {

void ModelParams::validate() const {
    std::vector<std::string> bad;
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) bad.push_back("epsilon must be >= 0");
    if (!(pbar > 0.0) || !std::isfinite(pbar)) bad.push_back("pbar must be > 0");
    if (chi == 0.0 || !std::isfinite(chi)) bad.push_back("chi must be nonzero");
    if (mu == 0.0 || !std::isfinite(mu)) bad.push_back("mu must be nonzero");
    if (chi * mu < 0.0) bad.push_back("chi*mu must be positive");
    if (!(diff > 0.0) || !std::isfinite(diff)) bad.push_back("diff must be > 0");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) bad.push_back("sigma must be >= 0");
    if (dim < 1 || dim > 3) bad.push_back("dim must be 1, 2 or 3");
    if (bad.empty()) return;
    std::string msg = "invalid model parameters:";
    for (auto& b : bad) msg += " " + b + ";";
    throw ValidationError(msg);
}

State::State(ScalarField p_, VectorField v_, double t) : p(std::move(p_)), v(std::move(v_)), time(t) {
    require_same_grid(p.grid, v.grid, "state");
    if (v.dim() != p.grid->dim()) throw ValidationError("state velocity must have dim components");
}

State State::zero(GridPtr g) { return State(ScalarField(g), VectorField(g), 0.0); }

SpectralState to_spectral(const State& s) {
    SpectralState out;
    out.p = forward(s.p);
    for (const auto& c : s.v.components) out.v.push_back(forward(c));
    return out;
}

State from_spectral(const SpectralState& s, double time) {
    std::vector<ScalarField> v;
    for (const auto& c : s.v) v.push_back(inverse(c));
    return State(inverse(s.p), VectorField(std::move(v)), time);
}

SpectralState flux_tendency(const SpectralState& s, const ModelParams& params, bool drop_quadratic) {
    const Grid& g = *s.p.grid;
    const int d = g.dim();
    const std::size_t n = g.size();
    const Complex I(0.0, 1.0);

    SpectralState out;
    out.p = Spectrum(s.p.grid);
    out.v.assign(d, Spectrum(s.p.grid));

    // linear couplings: pbar div v and grad p
    for_each_mode(g, [&](std::size_t i, const Mode& m) {
        Complex div(0.0, 0.0);
        for (int a = 0; a < d; ++a) {
            div += I * m.kd[a] * s.v[a].data[i];
            out.v[a].data[i] = I * m.kd[a] * s.p.data[i];
        }
        out.p.data[i] = params.pbar * div;
    });
    if (drop_quadratic) return out;

    std::vector<double> p(n), work(n), vsq(n, 0.0);
    std::vector<std::vector<double>> v(d, std::vector<double>(n));
    inverse_into(g, s.p.data.data(), p.data());
    for (int a = 0; a < d; ++a) {
        inverse_into(g, s.v[a].data.data(), v[a].data());
        for (std::size_t i = 0; i < n; ++i) vsq[i] += v[a][i] * v[a][i];
    }

    Spectrum prod(s.p.grid);
    for (int a = 0; a < d; ++a) {
        for (std::size_t i = 0; i < n; ++i) work[i] = p[i] * v[a][i];
        forward_into(g, work.data(), prod.data.data());
        dealias_in_place(prod);
        for_each_mode(g, [&](std::size_t i, const Mode& m) { out.p.data[i] += I * m.kd[a] * prod.data[i]; });
    }
    if (params.epsilon != 0.0) {
        forward_into(g, vsq.data(), prod.data.data());
        dealias_in_place(prod);
        for_each_mode(g, [&](std::size_t i, const Mode& m) {
            for (int a = 0; a < d; ++a) out.v[a].data[i] -= params.epsilon * I * m.kd[a] * prod.data[i];
        });
    }
    return out;
}

RhsParts rhs(const State& s, const ModelParams& params, bool drop_quadratic) {
    SpectralState ss = to_spectral(s);
    SpectralState nl = flux_tendency(ss, params, drop_quadratic);
    RhsParts out;
    out.lin_p = inverse(laplacian(ss.p));
    std::vector<ScalarField> lv;
    for (const auto& c : ss.v) {
        Spectrum l = laplacian(c);
        for (auto& x : l.data) x *= params.epsilon;
        lv.push_back(inverse(l));
    }
    out.lin_v = VectorField(std::move(lv));
    State nls = from_spectral(nl, s.time);
    out.nl_p = std::move(nls.p);
    out.nl_v = std::move(nls.v);
    return out;
}

std::pair<double, double> eigenvalues_1d(double P, double V, const ModelParams& params) {
    if (!(P > 0.0)) throw ValidationError("eigenvalues_1d needs P > 0");
    if (params.chi == 0.0) throw ValidationError("eigenvalues_1d needs chi != 0");
    const double a = 2.0 * params.epsilon / params.chi - 1.0;
    const double sgn = params.chi * params.mu > 0.0 ? 1.0 : -1.0;
    const double disc = a * a * V * V + 4.0 * sgn * P;
    if (disc < 0.0) throw ValidationError("characteristic speeds are complex (system changes type)");
    const double r = std::sqrt(disc);
    return {(a * V - r) / 2.0, (a * V + r) / 2.0};
}

VectorField cole_hopf_forward(const ScalarField& c, double /*sigma*/, double /*t*/) {
    double cmin = c.min();
    if (!(cmin > 0.0)) {
        std::ostringstream msg;
        msg << "concentration must be positive, min is " << cmin;
        throw NonPositiveConcentration(msg.str());
    }
    ScalarField lc = c;
    for (double& x : lc.values) x = std::log(x);
    return gradient(lc);
}

ScalarField cole_hopf_inverse(const VectorField& V, double sigma, double t, double c_ref) {
    if (!(c_ref > 0.0)) throw ValidationError("c_ref must be positive");
    ScalarField phi = inverse_gradient_potential(V);
    const double shift = phi.mean();
    const double scale = c_ref * std::exp(-sigma * t);
    for (double& x : phi.values) x = scale * std::exp(x - shift);
    return phi;
}

RescaleSpec rescale_to_clean(const ModelParams& params) {
    if (!(params.diff > 0.0)) throw ValidationError("rescale_to_clean needs D > 0");
    const double cm = std::abs(params.chi * params.mu);
    if (cm == 0.0) throw ValidationError("rescale_to_clean needs chi*mu != 0");
    RescaleSpec r;
    r.time_factor = cm / params.diff;
    r.space_factor = std::sqrt(cm) / params.diff;
    r.v_factor = -(params.chi > 0 ? 1.0 : -1.0) * std::sqrt(std::abs(params.chi) / std::abs(params.mu));
    return r;
}

State scale_solution(const State& s, double xi, GridPtr target) {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw ValidationError("scale factor must be positive");
    const Grid& src = *s.grid();
    if (target->dim() != src.dim()) throw ValidationError("scale_solution: target grid has a different dimension");
    const double want = src.length() / xi;
    if (std::abs(target->length() - want) > 1e-12 * want) {
        std::ostringstream msg;
        msg << "scale_solution: target length " << target->length() << " must equal " << want;
        throw ValidationError(msg.str());
    }
    // Integer Fourier modes are preserved by x -> xi x on the rescaled torus,
    // so scaling amounts to multiplying values and resampling the spectrum.
    auto resample = [&](const ScalarField& f, double factor) {
        Spectrum in = forward(f);
        Spectrum out = resample_spectrum(in, target);
        for (auto& c : out.data) c *= factor;
        return inverse(out);
    };
    std::vector<ScalarField> v;
    for (const auto& c : s.v.components) v.push_back(resample(c, xi));
    return State(resample(s.p, xi * xi), VectorField(std::move(v)), s.time / (xi * xi));
}

ModelParams scale_params(const ModelParams& params, double xi) {
    ModelParams out = params;
    out.pbar = xi * xi * params.pbar;
    return out;
}

}  // namespace bll
