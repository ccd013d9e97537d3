#include "bll/diagnostics.hpp"

#include <algorithm>
#include <tuple>
#include <cmath>
#include <sstream>

#include "bll/errors.hpp"
#include "bll/fft.hpp"
#include "bll/norms.hpp"
#include "bll/spectral_ops.hpp"

namespace bll {

namespace {

// Spatial derivatives of a state, all held as node values.
struct Derivs {
    int dim = 0;
    std::vector<ScalarField> grad_p;
    ScalarField lap_p;
    std::vector<ScalarField> grad_lap_p;
    ScalarField div_v;
    ScalarField lap_div_v;
    std::vector<ScalarField> lap_v;
    std::vector<std::vector<ScalarField>> grad_v;  // grad_v[i][j] = d_j v_i

    Derivs(const State& s, bool higher) {
        dim = s.grid()->dim();
        Spectrum ps = forward(s.p);
        std::vector<Spectrum> vs;
        for (const auto& c : s.v.components) vs.push_back(forward(c));
        Spectrum lp = laplacian(ps);
        Spectrum dv = divergence(vs);
        for (int a = 0; a < dim; ++a) grad_p.push_back(inverse(derivative(ps, a)));
        div_v = inverse(dv);
        grad_v.resize(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) grad_v[i].push_back(inverse(derivative(vs[i], j)));
        if (!higher) return;
        lap_p = inverse(lp);
        for (int a = 0; a < dim; ++a) grad_lap_p.push_back(inverse(derivative(lp, a)));
        lap_div_v = inverse(laplacian(dv));
        for (int i = 0; i < dim; ++i) lap_v.push_back(inverse(laplacian(vs[i])));
    }
};

// Quadrature of fn(i) over the nodes.
template <class Fn>
double quad(const Grid& g, Fn&& fn) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) sum += fn(i);
    return sum * g.cell_volume();
}

double sq(double x) { return x * x; }

double vec_sq(const std::vector<ScalarField>& v, std::size_t i) {
    double s = 0.0;
    for (const auto& c : v) s += c[i] * c[i];
    return s;
}

double mat_sq(const std::vector<std::vector<ScalarField>>& m, std::size_t i) {
    double s = 0.0;
    for (const auto& row : m) s += vec_sq(row, i);
    return s;
}

void require_positive(const State& s, double pbar, const char* what) {
    double m = s.min_density(pbar);
    if (!(m > 0.0)) {
        std::ostringstream msg;
        msg << what << ": min(p + pbar) = " << m;
        throw PositivityViolation(msg.str());
    }
}

double sq_norm(const ScalarField& f) { return quad(*f.grid, [&](std::size_t i) { return f[i] * f[i]; }); }

double sq_norm(const std::vector<ScalarField>& v) {
    double s = 0.0;
    for (const auto& c : v) s += sq_norm(c);
    return s;
}

double mat_sq_total(const std::vector<std::vector<ScalarField>>& m) {
    double s = 0.0;
    for (const auto& row : m) s += sq_norm(row);
    return s;
}

bool finite_le(double x, double bound) { return std::isfinite(x) && x <= bound; }

}  // namespace

double GNConstants::derived_c4(double c1, double c2, double c3) {
    return std::max(sq(c3 + c1 * c2), 4.0 * c1 * c1 * c2 * c2);
}

double GNConstants::derived_c5(double c1, double c2, double c3) { return 9.0 * c1 * c1 * c2 * c2 + c3 * c3; }

GNConstants GNConstants::from_base(double c1, double c2, double c3, double d1, double d2, double d3, double d4,
                                   double d5) {
    GNConstants g;
    g.c1 = c1, g.c2 = c2, g.c3 = c3;
    g.c4 = derived_c4(c1, c2, c3);
    g.c5 = derived_c5(c1, c2, c3);
    g.d1 = d1, g.d2 = d2, g.d3 = d3, g.d4 = d4, g.d5 = d5;
    return g;
}

void GNConstants::validate() const {
    std::vector<std::string> bad;
    const double all[] = {c1, c2, c3, c4, c5, d1, d2, d3, d4, d5};
    const char* names[] = {"c1", "c2", "c3", "c4", "c5", "d1", "d2", "d3", "d4", "d5"};
    for (int i = 0; i < 10; ++i)
        if (!(all[i] > 0.0) || !std::isfinite(all[i])) bad.push_back(std::string(names[i]) + " must be > 0");
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    if (!close(c4, derived_c4(c1, c2, c3))) bad.push_back("c4 must equal max{(c3+c1c2)^2, 4c1^2c2^2}");
    if (!close(c5, derived_c5(c1, c2, c3))) bad.push_back("c5 must equal 9c1^2c2^2 + c3^2");
    if (bad.empty()) return;
    std::string msg = "invalid GN constants:";
    for (auto& b : bad) msg += " " + b + ";";
    throw ValidationError(msg);
}

Window::Window(const State& a, const State& b, const State& c) : prev(&a), mid(&b), next(&c) {
    const double h1 = b.time - a.time, h2 = c.time - b.time;
    if (!(h1 > 0.0) || std::abs(h1 - h2) > 1e-9 * std::max(std::abs(h1), std::abs(b.time)))
        throw ValidationError("window snapshots must be equally spaced in increasing time");
}

double Window::half_span() const { return 0.5 * (next->time - prev->time); }

std::pair<double, double> k_coefficients(double e, double pbar) {
    const double k1 = ((8 * e * e + 8 * e * e * e) / pbar + 3 * sq(2 * e + 1)) / 12.0;
    const double k2 = ((4 * e + 4 * e * e) / pbar + 9 * e + 32 * e * e * e) / 12.0;
    return {k1, k2};
}

double entropy_expansion(const ScalarField& p, double pbar) {
    double m = p.min() + pbar;
    if (!(m > 0.0)) {
        std::ostringstream msg;
        msg << "entropy_expansion: min(p + pbar) = " << m;
        throw PositivityViolation(msg.str());
    }
    // pbar [ (1+x) log(1+x) - x ] with x = p / pbar
    return quad(*p.grid, [&](std::size_t i) {
        const double x = p[i] / pbar;
        return pbar * ((1.0 + x) * std::log1p(x) - x);
    });
}

double entropy_total(const State& s, double pbar) {
    double v2 = 0.0;
    for (const auto& c : s.v.components) v2 += sq_norm(c);
    return entropy_expansion(s.p, pbar) + 0.5 * v2;
}

double entropy_dissipation(const State& s, const ModelParams& params) {
    require_positive(s, params.pbar, "entropy_dissipation");
    Derivs d(s, false);
    const Grid& g = *s.grid();
    return quad(g, [&](std::size_t i) {
        return vec_sq(d.grad_p, i) / (s.p[i] + params.pbar) + params.epsilon * mat_sq(d.grad_v, i);
    });
}

double entropy_source(const State& s, double epsilon) {
    if (epsilon == 0.0) return 0.0;
    ScalarField dv = divergence(s.v);
    return epsilon * quad(*s.grid(), [&](std::size_t i) { return vec_sq(s.v.components, i) * dv[i]; });
}

double entropy_identity_residual_1d(const Window& w, double epsilon, double pbar) {
    if (w.mid->grid()->dim() != 1) throw ValidationError("entropy_identity_residual_1d needs dim 1");
    ModelParams mp;
    mp.epsilon = epsilon;
    mp.pbar = pbar;
    const double dF = (entropy_total(*w.next, pbar) - entropy_total(*w.prev, pbar)) / (2.0 * w.half_span());
    return std::abs(dF + entropy_dissipation(*w.mid, mp));
}

std::pair<double, double> entropy_balance_multi(const Window& w, const ModelParams& params) {
    if (w.mid->grid()->dim() < 2) throw ValidationError("entropy_balance_multi needs dim >= 2");
    const double dF =
        (entropy_total(*w.next, params.pbar) - entropy_total(*w.prev, params.pbar)) / (2.0 * w.half_span());
    return {dF + entropy_dissipation(*w.mid, params), entropy_source(*w.mid, params.epsilon)};
}

std::pair<double, double> compute_kappa_N1(const State& s0, double pbar) {
    // Parseval sums keep this cheap on large 3D grids
    const Grid& g = *s0.grid();
    double p2 = 0.0, gp = 0.0, v2 = 0.0, dv = 0.0;
    Spectrum ps = forward(s0.p);
    std::vector<Spectrum> vs;
    for (const auto& c : s0.v.components) vs.push_back(forward(c));
    for_each_mode(g, [&](std::size_t i, const Mode& m) {
        double kd2 = 0.0;
        Complex div = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            kd2 += m.kd[a] * m.kd[a];
            div += Complex(0.0, m.kd[a]) * vs[a].data[i];
            v2 += m.weight * std::norm(vs[a].data[i]);
        }
        p2 += m.weight * std::norm(ps.data[i]);
        gp += m.weight * kd2 * std::norm(ps.data[i]);
        dv += m.weight * std::norm(div);
    });
    const double V = g.volume();
    p2 *= V, gp *= V, v2 *= V, dv *= V;
    const double f = 1.0 + 1.0 / pbar;
    return {2.0 * f * (gp + pbar * dv), f * (p2 + pbar * v2) + 1.0};
}

InitialNorms3D initial_norms_3d(const State& s0) {
    Derivs d(s0, true);
    InitialNorms3D n;
    n.p_h1_sq = sq_norm(s0.p) + sq_norm(d.grad_p);
    n.v_h1_sq = sq_norm(s0.v.components) + mat_sq_total(d.grad_v);
    n.lap_p_sq = sq_norm(d.lap_p);
    n.lap_v_sq = sq_norm(d.lap_v);
    n.grad_lap_p_sq = sq_norm(d.grad_lap_p);
    n.lap_div_v_sq = sq_norm(d.lap_div_v);
    return n;
}

SmallnessReport3D smallness_check_3d(double kappa, double N1, const GNConstants& gn, double pbar,
                                     const InitialNorms3D& n) {
    gn.validate();
    if (!(pbar > 0.0)) throw ValidationError("pbar must be positive");
    SmallnessReport3D r;
    r.kappa = kappa;
    r.N1 = N1;
    const double cc = gn.c1 * gn.c2;
    r.threshold = std::min({std::pow(1.0 / (16.0 * cc), 4), 1.0 / (8.0 * cc), 1.0 / (54.0 * std::pow(gn.c3, 4)), 1.0});
    r.condition_ok = N1 * kappa <= r.threshold;

    const double f = 1.0 + 1.0 / pbar;
    const double h1 = n.p_h1_sq + pbar * n.v_h1_sq;
    const double h2 = n.lap_p_sq + pbar * n.lap_v_sq;
    const double h3 = n.grad_lap_p_sq + pbar * n.lap_div_v_sq;
    r.N2 = f * std::exp(1.5 * gn.c4 / pbar * h1) * h2 + 1.0;
    r.Nhat = 1.5 * gn.c4 / (pbar + 1.0) * h1 * (r.N2 - 1.0) + h2;
    r.N3 = f * std::exp(1.5 * gn.c5 / pbar * h1) * (h3 + gn.c5 * (1.0 + r.N2) * r.Nhat) + 1.0;
    return r;
}

SmallnessReport3D smallness_check_3d(const State& s0, double pbar, const GNConstants& gn) {
    auto [kappa, N1] = compute_kappa_N1(s0, pbar);
    return smallness_check_3d(kappa, N1, gn, pbar, initial_norms_3d(s0));
}

double compute_H1(const State& s0, const ModelParams& params) {
    const double e = params.epsilon, pb = params.pbar;
    auto [k1, k2] = k_coefficients(e, pb);
    const auto& v = s0.v.components;
    return quad(*s0.grid(), [&](std::size_t i) {
        const double p = s0.p[i];
        const double v2 = vec_sq(v, i);
        double v4 = 0.0;
        for (const auto& c : v) v4 += sq(sq(c[i]));
        return 0.5 * p * p + 0.5 * pb * v2 - e * p * v2 - (2 * e + 1) / 6.0 * p * p * p + k1 * sq(sq(p)) +
               2 * e * e / pb * p * p * v2 + k2 * v4;
    });
}

double compute_H2(const State& s0, const ModelParams& params) {
    const double pb = params.pbar;
    Derivs d(s0, false);
    return quad(*s0.grid(), [&](std::size_t i) {
        const double p = s0.p[i];
        const double gp = vec_sq(d.grad_p, i);
        return pb * pb * gp + pb * pb * pb * sq(d.div_v[i]) - pb * p * gp + p * p * gp;
    });
}

SmallnessReport2D compute_H1_H2_M1_delta(const State& s0, const ModelParams& params, const GNConstants& gn) {
    if (s0.grid()->dim() != 2) throw ValidationError("compute_H1_H2_M1_delta needs dim 2");
    gn.validate();
    const double e = params.epsilon, pb = params.pbar;
    SmallnessReport2D r;
    std::tie(r.k1, r.k2) = k_coefficients(e, pb);
    r.H1 = compute_H1(s0, params);
    r.H2 = compute_H2(s0, params);
    r.M1 = 4.0 * (1.0 + 1.0 / pb) * r.H1 + 1.0;

    const double d1 = gn.d1, d2 = gn.d2, d3 = gn.d3, d4 = gn.d4, d5 = gn.d5;
    const double d1_4 = std::pow(d1, 4), d1_8 = std::pow(d1, 8);
    const double expo =
        4.0 / pb * (2916 * d1_8 * pb * pb * r.M1 + 3 * d1_4 * pb * pb + 27 * d1_8 * r.M1 * pb * pb +
                    2916 * d1_8 * std::pow(d5, 4) / pb) *
        r.H1;
    r.delta = r.H2 == 0.0 ? 0.0 : 2.0 * (2 * pb + 1) / (pb * pb * pb) * std::exp(expo) * r.H2;

    const double s1 = std::sqrt(r.M1 * r.delta);
    const double s2 = std::sqrt(r.M1 * r.delta * r.delta);
    const double k1x12 = 12.0 * r.k1;
    r.B[0] = d1 * d3 * d3 * (2 * e + 1 + k1x12 + 4 * e * e / pb) * s1;
    r.B[1] = 2 * d1 * d3 * d3 * (2 * e + 1) * s1;
    r.B[2] = d1 * d4 * d4 * ((8 * e * e + 8 * e * e * e) / pb + 3 * sq(2 * e + 1)) * s2;
    r.B[3] = 4 * (std::pow(d3, 4) + d1 * std::pow(d4, 3)) * e / pb * s2;
    r.B[4] = 4 * d1 * d3 * d3 * e / pb * s1;
    r.B[5] = 8 * std::pow(d3, 4) * e * e / pb * s2;
    r.B[6] = 2.0 / 3.0 * std::pow(d2, 3) * ((4 + 4 * e) / pb + 9 + 32 * e * e) * s1;
    r.B[7] = 32 * std::pow(d3, 4) * r.k2 * s2;
    for (int i = 0; i < 8; ++i) r.B_ok[i] = finite_le(r.B[i], (i == 0 || i == 2) ? 1.0 / 16.0 : pb / 24.0);

    r.C[0] = 2916 * d1_8 * pb * pb * r.M1;
    r.C[1] = 3 * d1_4 * pb * pb;
    r.C[2] = 27 * d1_8 * r.M1 * pb * pb;
    const double sd = std::sqrt(r.delta);
    r.D[0] = 2916 * d1_8 * std::pow(d5, 4) / pb * (r.M1 * r.delta * r.delta);
    r.D[1] = 2 * (d5 * d5 + d1 * d1 * d5) * pb * s1;
    r.D[2] = d1 * d1 * pb * sd;
    r.D[3] = 2 * d1 * d1 * d5 * pb * s1;
    r.D[4] = (d5 * d5 + d1 * d1 * d5) * s1;
    r.D[5] = 2 * d5 * d5 * pb * s1;
    r.D[6] = d1 * d1 * sd;
    r.D[7] = 2 * (d1 * d1 * d5 * d5 + std::pow(d1, 4) * d5) * s2;
    r.D_ok[0] = finite_le(r.M1 * r.delta * r.delta, 1.0);
    for (int j = 1; j < 8; ++j) {
        double bound = pb / 28.0;
        if (j == 4 || j == 6) bound = std::min(bound, 0.25);
        r.D_ok[j] = finite_le(r.D[j], bound);
    }
    r.conditions_ok = std::all_of(r.B_ok.begin(), r.B_ok.end(), [](bool b) { return b; }) &&
                      std::all_of(r.D_ok.begin(), r.D_ok.end(), [](bool b) { return b; });
    return r;
}

std::pair<double, double> energy_E3_D3(const State& s, const ModelParams& params) {
    require_positive(s, params.pbar, "energy_E3_D3");
    const double e = params.epsilon, pb = params.pbar;
    auto [k1, k2] = k_coefficients(e, pb);
    (void)k1;
    const double c = (2 * e + 1) / 6.0;
    const double c4 = 2 * sq(2 * e + 1) / 9.0 + (8 * e * e + 8 * e * e * e) / (12.0 * pb);
    const auto& v = s.v.components;
    const Grid& g = *s.grid();
    const double E3 = quad(g, [&](std::size_t i) {
        const double p = s.p[i];
        const double v2 = vec_sq(v, i);
        double v4 = 0.0;
        for (const auto& comp : v) v4 += sq(sq(comp[i]));
        return 0.25 * p * p + sq(0.5 * p - c * p * p) + c4 * sq(sq(p)) + 0.25 * pb * v2 +
               0.25 * pb * sq(1.0 - 2.0 * e / pb * p) * v2 + e * e / pb * p * p * v2 + k2 * v4;
    });
    Derivs d(s, false);
    const double D3 = quad(g, [&](std::size_t i) {
        const double p = s.p[i];
        const double gp = vec_sq(d.grad_p, i);
        const double v2 = vec_sq(v, i);
        double comp = 0.0;
        for (int a = 0; a < d.dim; ++a) comp += sq(v[a][i]) * vec_sq(d.grad_v[a], i);
        return 0.375 * gp + 0.125 * sq(1.0 - 4.0 * (2 * e + 1) * p) * gp + sq(2 * e + 1) * p * p * gp +
               0.5 * e * pb * sq(d.div_v[i]) + 4 * e * e / pb * v2 * gp + 2 * e * e * e / pb * p * p * mat_sq(d.grad_v, i) +
               e * e * comp;
    });
    return {E3, D3};
}

std::pair<double, double> energy_E4_D4(const State& s, const ModelParams& params) {
    require_positive(s, params.pbar, "energy_E4_D4");
    const double e = params.epsilon, pb = params.pbar;
    Derivs d(s, true);
    const Grid& g = *s.grid();
    const double E4 = quad(g, [&](std::size_t i) {
        const double p = s.p[i];
        const double gp = vec_sq(d.grad_p, i);
        return 0.5 * pb * pb * gp + pb * pb * pb * sq(d.div_v[i]) + 0.5 * sq(pb - p) * gp + 0.5 * p * p * gp;
    });
    const double D4 = quad(g, [&](std::size_t i) {
        const double p = s.p[i];
        const double lp = sq(d.lap_p[i]);
        return 0.5 * pb * pb * lp + sq(pb - p) * lp + e * pb * pb * pb * vec_sq(d.lap_v, i) + 0.5 * p * p * lp;
    });
    return {E4, D4};
}

std::pair<double, double> energy_E5_D5(const State& s, const ModelParams& params) {
    const double e = params.epsilon, pb = params.pbar;
    Derivs d(s, true);
    const Grid& g = *s.grid();
    const double E5 = quad(g, [&](std::size_t i) {
        const double p = s.p[i];
        const double lp = sq(d.lap_p[i]);
        return 0.5 * pb * lp + pb * pb * vec_sq(d.lap_v, i) + 0.5 / pb * sq(pb - p) * lp + 0.5 / pb * p * p * lp;
    });
    const double D5 = quad(g, [&](std::size_t i) {
        const double p = s.p[i];
        const double gl = vec_sq(d.grad_lap_p, i);
        return 0.5 * pb * gl + sq(pb - p) / pb * gl + 0.5 / pb * p * p * gl + e * pb * pb * sq(d.lap_div_v[i]);
    });
    return {E5, D5};
}

double damping_equation_residual(const Window& w, const ModelParams& params) {
    const State& m = *w.mid;
    const Grid& g = *m.grid();
    const int dim = g.dim();
    if (dim < 2) throw ValidationError("damping_equation_residual needs dim >= 2");
    const double inv2h = 1.0 / (2.0 * w.half_span());
    const double e = params.epsilon;
    const Complex I(0.0, 1.0);

    auto spectra = [](const State& s) { return to_spectral(s); };
    SpectralState a = spectra(*w.prev), b = spectra(m), c = spectra(*w.next);

    // dealiased products at the midpoint, as in the flux
    std::vector<Spectrum> pv;
    ScalarField v2(m.grid());
    for (int k = 0; k < dim; ++k) {
        pv.push_back(dealias(forward(m.p * m.v[k])));
        v2 = v2 + m.v[k] * m.v[k];
    }
    Spectrum v2s = dealias(forward(v2));

    Spectrum r(m.grid());
    for_each_mode(g, [&](std::size_t i, const Mode& md) {
        Complex div = 0.0, div_t = 0.0, div_pv = 0.0;
        for (int k = 0; k < dim; ++k) {
            div += I * md.kd[k] * b.v[k].data[i];
            div_t += I * md.kd[k] * (c.v[k].data[i] - a.v[k].data[i]) * inv2h;
            div_pv += I * md.kd[k] * pv[k].data[i];
        }
        const Complex p_t = (c.p.data[i] - a.p.data[i]) * inv2h;
        r.data[i] = div_t + params.pbar * div + e * md.k2 * div - p_t - e * md.k2 * v2s.data[i] + div_pv;
    });
    return norm_l2(r);
}

EnergyReport norm_report(const State& s, const ModelParams& params, const GNConstants& gn) {
    EnergyReport r;
    const Grid& g = *s.grid();
    r.dim = g.dim();
    r.time = s.time;
    r.l2_p = norm_l2(s.p);
    r.l2_v = norm_l2(s.v);
    Derivs d(s, true);
    std::vector<ScalarField> grad_div;
    {
        Spectrum dv = forward(d.div_v);
        for (int a = 0; a < r.dim; ++a) grad_div.push_back(inverse(derivative(dv, a)));
    }
    r.h1 = sq_norm(d.grad_p) + sq_norm(d.div_v);
    r.h2 = sq_norm(d.lap_p) + sq_norm(grad_div);
    r.h3 = sq_norm(d.grad_lap_p) + sq_norm(d.lap_div_v);
    r.curl = curl_norm(s.v);
    r.min_density = s.min_density(params.pbar);
    r.entropy = entropy_total(s, params.pbar);
    r.lp4_p = norm_lp(s.p, 4);
    r.lp4_v = norm_lp(s.v, 4);
    if (r.dim <= 2) {
        std::tie(r.E3, r.D3) = energy_E3_D3(s, params);
        std::tie(r.E4, r.D4) = energy_E4_D4(s, params);
        std::tie(r.E5, r.D5) = energy_E5_D5(s, params);
    } else {
        auto sm = smallness_check_3d(s, params.pbar, gn);
        r.kappa_t = sm.kappa;
        r.N1_t = sm.N1;
        r.N2_t = sm.N2;
        r.N3_t = sm.N3;
    }
    return r;
}

}  // namespace bll
