#include "bll/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include "bll/errors.hpp"
#include "bll/fft.hpp"
#include "bll/init.hpp"
#include "bll/norms.hpp"
#include "bll/spectral_ops.hpp"

namespace bll {

namespace {

using std::numbers::pi;

// Runs tasks[i] for every i on at most worker_limit() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) {
    const unsigned workers = std::min<unsigned>(worker_limit(), static_cast<unsigned>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) task(i);
        });
    for (auto& t : pool) t.join();
}

double sq(double x) { return x * x; }

RunOptions final_only() {
    RunOptions o;
    o.compute_reports = false;
    o.store_states = true;
    return o;
}

}  // namespace

unsigned worker_limit() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BLL_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    return hw;
}

FitLine fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_loglog needs at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw ValidationError("fit_loglog needs distinct abscissae");
    FitLine f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) rss += sq(std::log(y[i]) - f.intercept - f.slope * std::log(x[i]));
    f.residual = std::sqrt(rss / n);
    return f;
}

SweepResult diffusion_limit_sweep(const State& base, const ModelParams& params0, std::vector<double> epsilons,
                                  double t_probe, const StepperConfig& stepper) {
    int positive = 0;
    for (double e : epsilons) {
        if (!(e > 0.0) || !std::isfinite(e))
            throw ValidationError("sweep epsilons must be positive (the epsilon = 0 reference is added)");
        ++positive;
    }
    if (positive < 3) throw ValidationError("sweep needs at least three positive epsilons");
    if (!(t_probe > 0.0)) throw ValidationError("t_probe must be positive");
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
    if (std::adjacent_find(epsilons.begin(), epsilons.end()) != epsilons.end())
        throw ValidationError("sweep epsilons must be distinct");

    SweepResult r;
    r.epsilons = epsilons;
    r.t_probe = t_probe;
    ModelParams largest = params0;
    largest.epsilon = epsilons.front();
    r.dt = plan_steps(t_probe, resolve_dt(base, largest, stepper)).second;

    StepperConfig cfg = stepper;
    cfg.dt = r.dt;
    cfg.t_end = t_probe;
    cfg.report_every = 1 << 30;

    // entry 0 is the reference
    std::vector<double> eps_all{0.0};
    eps_all.insert(eps_all.end(), epsilons.begin(), epsilons.end());
    std::vector<State> finals(eps_all.size());
    std::vector<std::string> errs(eps_all.size());
    parallel_for(eps_all.size(), [&](std::size_t i) {
        ModelParams mp = params0;
        mp.epsilon = eps_all[i];
        try {
            StepperConfig c = cfg;
            auto traj = run(base, mp, c, {}, final_only());
            finals[i] = traj.states.back();
        } catch (const Error& e) {
            errs[i] = e.what();
        }
    });
    if (!errs[0].empty()) throw SolverError("reference run (epsilon = 0) failed: " + errs[0]);

    const State& ref = finals[0];
    std::vector<double> fx, fh, fl;
    for (std::size_t i = 1; i < eps_all.size(); ++i) {
        const bool bad = !errs[i].empty();
        r.failed.push_back(bad);
        r.errors.push_back(errs[i]);
        if (bad) {
            r.diff_h1_sq.push_back(NAN);
            r.diff_lap_sq.push_back(NAN);
            continue;
        }
        ScalarField dp = finals[i].p - ref.p;
        VectorField dv = finals[i].v - ref.v;
        const double h1 = sq(norm_hk(dp, 1)) + sq(norm_hk(dv, 1));
        const double lap = sq(norm_l2(laplacian(dp))) + sq(norm_l2(laplacian(dv)));
        r.diff_h1_sq.push_back(h1);
        r.diff_lap_sq.push_back(lap);
        if (h1 > 100 * DBL_EPSILON && lap > 100 * DBL_EPSILON) {
            fx.push_back(eps_all[i]);
            fh.push_back(h1);
            fl.push_back(lap);
        }
    }
    r.fitted_points = static_cast<int>(fx.size());
    if (fx.size() >= 2) {
        FitLine a = fit_loglog(fx, fh), b = fit_loglog(fx, fl);
        r.slope_h1 = a.slope;
        r.slope_lap = b.slope;
        r.fitted_prefactors = {std::exp(a.intercept), std::exp(b.intercept)};
    } else {
        r.slope_h1 = r.slope_lap = NAN;
    }
    return r;
}

DecayResult decay_experiment(const State& s0, const ModelParams& params, const StepperConfig& stepper, double t_end,
                             const GNConstants& gn) {
    DecayResult r;
    const int dim = s0.grid()->dim();
    if (dim == 2) {
        r.smallness_passed = compute_H1_H2_M1_delta(s0, params, gn).conditions_ok;
    } else if (dim == 3) {
        r.smallness_passed = smallness_check_3d(s0, params.pbar, gn).condition_ok;
    }
    if (!r.smallness_passed) warn("decay_experiment: initial data fail the smallness check; running anyway");

    StepperConfig cfg = stepper;
    cfg.t_end = t_end;
    Observer ob = [&](const State& s, long) {
        const double gp = sq(norm_l2(gradient(s.p)));
        const double dv = sq(norm_l2(divergence(s.v)));
        double w = s.p.max_abs() + s.v.magnitude().max_abs();
        w += gradient(s.p).magnitude().max_abs();
        double gv = 0.0;
        for (int a = 0; a < dim; ++a) gv = std::max(gv, gradient(s.v[a]).magnitude().max_abs());
        w += gv;
        r.times.push_back(s.time);
        r.grad_norm_sq.push_back(gp + dv);
        r.winf_norm.push_back(w);
    };
    RunOptions o;
    o.compute_reports = false;
    o.gn = gn;
    run(s0, params, cfg, {ob}, o);
    const double g0 = r.grad_norm_sq.front();
    if (g0 == 0.0) {
        r.degenerate = true;
        r.ratio_final = 0.0;
    } else {
        r.ratio_final = r.grad_norm_sq.back() / g0;
    }
    return r;
}

bool smoothed_nonincreasing(const std::vector<double>& times, const std::vector<double>& values, double transient,
                            int window) {
    if (times.size() != values.size() || times.empty()) return false;
    const double t0 = times.front(), t1 = times.back();
    const double cut = t0 + transient * (t1 - t0);
    std::vector<double> avg;
    std::vector<double> at;
    for (std::size_t i = 0; i + window <= values.size(); ++i) {
        double s = 0.0;
        for (int k = 0; k < window; ++k) s += values[i + k];
        avg.push_back(s / window);
        at.push_back(times[i]);
    }
    for (std::size_t i = 1; i < avg.size(); ++i)
        if (at[i - 1] >= cut && avg[i] > avg[i - 1]) return false;
    return true;
}

ScalingTable appendix_scaling_experiment(Family family, const std::vector<int>& n_list, const ModelParams& params,
                                         const GridPolicy& policy) {
    ScalingTable t;
    t.family = family;
    const bool three = family == Family::Appendix3D;
    const int points = policy.points > 0 ? policy.points : (three ? 128 : 1024);
    const double factor = policy.length_factor > 0 ? policy.length_factor : 10.0;
    const double fs = policy.f_scale > 0 ? policy.f_scale : kDefaultFScale;
    ModelParams mp = params;
    mp.dim = three ? 3 : 2;

    std::vector<int> ok_n;
    std::map<std::string, std::vector<double>> vals;
    for (int n : n_list) {
        try {
            const double scale = three ? double(n) : appendix2d_f(n, fs);
            auto g = make_grid(mp.dim, points, factor * pi * scale);
            const double width = 2.0 * pi * scale / g->spacing();
            if (width < 16.0) {
                std::ostringstream msg;
                msg << "n = " << n << ": support spans only " << width << " nodes";
                warn(msg.str());
            }
            State s = three ? init_appendix_3d(n, mp.pbar, g) : init_appendix_2d(n, mp.pbar, fs, g);
            std::map<std::string, double> row;
            row["p_sq"] = sq(norm_l2(s.p));
            row["v_sq"] = sq(norm_l2(s.v));
            if (three) {
                auto [kappa, N1] = compute_kappa_N1(s, mp.pbar);
                Spectrum ps = forward(s.p);
                double gp = 0.0;
                for (int a = 0; a < 3; ++a) gp += sq(norm_l2(derivative(ps, a)));
                std::vector<Spectrum> vs;
                for (const auto& c : s.v.components) vs.push_back(forward(c));
                row["grad_p_sq"] = gp;
                row["div_v_sq"] = sq(norm_l2(divergence(vs)));
                row["kappa"] = kappa;
                row["N1"] = N1;
                row["N1kappa"] = N1 * kappa;
            } else {
                auto rep = compute_H1_H2_M1_delta(s, mp, GNConstants{});
                row["E3_0"] = rep.H1;
                row["E4_0"] = rep.H2;
                row["M1"] = rep.M1;
                row["delta"] = rep.delta;
            }
            for (auto& [k, v] : row) vals[k].push_back(v);
            ok_n.push_back(n);
        } catch (const DomainTooSmall& e) {
            t.errors.push_back(e.what());
        } catch (const OverflowGuard& e) {
            t.errors.push_back(e.what());
        }
    }
    t.n_list = ok_n;
    t.values = vals;
    if (ok_n.size() >= 2) {
        std::vector<double> xn(ok_n.begin(), ok_n.end());
        for (auto& [k, v] : vals) {
            bool positive = std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
            if (positive) t.exponents[k] = fit_loglog(xn, v);
        }
    }
    return t;
}

namespace {

// Exact solution and forcing for the manufactured problems.
struct Manufactured {
    std::function<double(double, double)> p, pt, px, pxx;
    std::function<double(double, double)> v, vt, vx, vxx;
};

Manufactured trig_solution(double A, double B) {
    Manufactured m;
    m.p = [=](double x, double t) { return A * std::sin(x - t); };
    m.pt = [=](double x, double t) { return -A * std::cos(x - t); };
    m.px = [=](double x, double t) { return A * std::cos(x - t); };
    m.pxx = [=](double x, double t) { return -A * std::sin(x - t); };
    m.v = [=](double x, double t) { return B * std::cos(x + 2 * t); };
    m.vt = [=](double x, double t) { return -2 * B * std::sin(x + 2 * t); };
    m.vx = [=](double x, double t) { return -B * std::sin(x + 2 * t); };
    m.vxx = [=](double x, double t) { return -B * std::cos(x + 2 * t); };
    return m;
}

// g(s) = 1 / (1 - r cos s) has Fourier coefficients decaying like rho^|m|.
Manufactured analytic_solution(double A, double B, double r) {
    auto q = [=](double s) { return 1.0 - r * std::cos(s); };
    auto g = [=](double s) { return 1.0 / q(s); };
    auto g1 = [=](double s) { return -r * std::sin(s) / sq(q(s)); };
    auto g2 = [=](double s) {
        const double qq = q(s), q1 = r * std::sin(s), q2 = r * std::cos(s);
        return -q2 / (qq * qq) + 2 * q1 * q1 / (qq * qq * qq);
    };
    const double mean = 1.0 / std::sqrt(1.0 - r * r);
    Manufactured m;
    m.p = [=](double x, double t) { return A * g(x - t); };
    m.pt = [=](double x, double t) { return -A * g1(x - t); };
    m.px = [=](double x, double t) { return A * g1(x - t); };
    m.pxx = [=](double x, double t) { return A * g2(x - t); };
    m.v = [=](double x, double t) { return B * (g(x + t) - mean); };
    m.vt = [=](double x, double t) { return B * g1(x + t); };
    m.vx = [=](double x, double t) { return B * g1(x + t); };
    m.vxx = [=](double x, double t) { return B * g2(x + t); };
    return m;
}

double mms_error(const Manufactured& m, int points, double dt, double T, double eps, double pbar, Scheme scheme) {
    auto g = make_grid(1, points, 2 * pi);
    ModelParams mp;
    mp.dim = 1;
    mp.epsilon = eps;
    mp.pbar = pbar;
    auto at = [&](auto fn, double t) { return sample(g, [&](const std::array<double, 3>& x) { return fn(x[0], t); }); };
    State s0(at(m.p, 0.0), VectorField({at(m.v, 0.0)}), 0.0);
    RunOptions o;
    o.compute_reports = false;
    o.store_states = true;
    o.forcing = [&](double t) {
        auto fp = [&](double x, double tt) {
            const double p = m.p(x, tt), v = m.v(x, tt);
            return m.pt(x, tt) - m.pxx(x, tt) - (m.px(x, tt) * v + p * m.vx(x, tt)) - pbar * m.vx(x, tt);
        };
        auto fv = [&](double x, double tt) {
            return m.vt(x, tt) - m.px(x, tt) + eps * 2.0 * m.v(x, tt) * m.vx(x, tt) - eps * m.vxx(x, tt);
        };
        SpectralState f;
        f.p = forward(at(fp, t));
        f.v.push_back(forward(at(fv, t)));
        return f;
    };
    StepperConfig c;
    c.scheme = scheme;
    c.dt = dt;
    c.t_end = T;
    c.report_every = 1 << 30;
    State sT = run(s0, mp, c, {}, o).states.back();
    return std::hypot(norm_l2(sT.p - at(m.p, T)), norm_l2(sT.v[0] - at(m.v, T)));
}

}  // namespace

MmsResult mms_order_experiment(Scheme scheme, const MmsOptions& opt) {
    if (opt.levels < 2) throw ValidationError("mms_order_experiment needs at least two levels");
    MmsResult r;
    Manufactured trig = trig_solution(0.1, 0.1);
    double dt = opt.dt0;
    for (int l = 0; l < opt.levels; ++l, dt /= 2) {
        r.dts.push_back(dt);
        r.time_errors.push_back(mms_error(trig, 32, dt, opt.t_end, opt.epsilon, opt.pbar, scheme));
    }
    r.time_order = INFINITY;
    for (std::size_t i = 1; i < r.time_errors.size(); ++i) {
        r.time_ratios.push_back(r.time_errors[i - 1] / r.time_errors[i]);
        r.time_order = std::min(r.time_order, std::log2(r.time_ratios.back()));
    }
    Manufactured an = analytic_solution(0.1, 0.1, 0.8);
    for (int n : opt.space_points) {
        r.points.push_back(n);
        r.space_errors.push_back(mms_error(an, n, opt.space_dt, opt.space_t_end, opt.epsilon, opt.pbar, scheme));
    }
    if (r.space_errors.size() >= 2) r.space_ratio = r.space_errors[0] / r.space_errors[1];

    Manufactured zero;
    auto z = [](double, double) { return 0.0; };
    zero.p = zero.pt = zero.px = zero.pxx = zero.v = zero.vt = zero.vx = zero.vxx = z;
    r.zero_forcing_error = mms_error(zero, 32, opt.dt0, opt.t_end, opt.epsilon, opt.pbar, scheme);
    return r;
}

std::vector<CheckResult> verify_suite(const State& s0, const ModelParams& params, const StepperConfig& stepper,
                                      const GNConstants& gn) {
    std::vector<CheckResult> out;
    auto add = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };
    auto fmt = [](auto... xs) {
        std::ostringstream o;
        o.precision(4);
        ((o << xs), ...);
        return o.str();
    };

    MmsResult mms = mms_order_experiment(Scheme::CNAB2);
    add("temporal order (cnab2)", mms.time_order >= 1.9, fmt("min observed order ", mms.time_order));
    add("spectral accuracy", mms.space_ratio >= 100.0, fmt("error ratio 32 -> 64 points ", mms.space_ratio));
    add("zero forcing", mms.zero_forcing_error <= 1e-14, fmt("error ", mms.zero_forcing_error));

    // spectral calculus on the run grid
    auto g = s0.grid();
    State probe = init_manufactured(g, 7, 0.1, 1.0);
    const double lap_gap = norm_l2(divergence(gradient(probe.p)) - laplacian(probe.p));
    const double lap_ref = std::max(norm_l2(laplacian(probe.p)), 1.0);
    add("div grad = laplacian", lap_gap <= 1e-12 * lap_ref, fmt("relative gap ", lap_gap / lap_ref));
    const double parseval = std::abs(norm_l2(forward(probe.p)) - norm_l2_quadrature(probe.p));
    add("parseval", parseval <= 1e-12 * std::max(1.0, norm_l2(probe.p)), fmt("gap ", parseval));

    RunOptions o;
    o.gn = gn;
    o.compute_reports = false;
    const double mean0 = s0.p.mean();
    std::vector<double> vmean0;
    for (const auto& c : s0.v.components) vmean0.push_back(c.mean());
    double mean_drift = 0.0, curl_max = 0.0, min_rho = INFINITY;
    Observer ob = [&](const State& s, long) {
        mean_drift = std::max(mean_drift, std::abs(s.p.mean() - mean0));
        for (std::size_t a = 0; a < vmean0.size(); ++a)
            mean_drift = std::max(mean_drift, std::abs(s.v[a].mean() - vmean0[a]));
        if (g->dim() >= 2) curl_max = std::max(curl_max, curl_norm(s.v));
        min_rho = std::min(min_rho, s.min_density(params.pbar));
    };
    std::string failure;
    try {
        run(s0, params, stepper, {ob}, o);
    } catch (const Error& e) {
        failure = e.what();
    }
    const bool ran = failure.empty();
    add("short run", ran, ran ? fmt("reached t = ", stepper.t_end) : failure);
    add("mass conservation", ran && mean_drift <= 1e-12, fmt("max mean drift ", mean_drift));
    if (g->dim() >= 2) add("curl-free velocity", ran && curl_max <= 1e-9, fmt("max curl ", curl_max));
    add("positivity", ran && min_rho > 0.0, fmt("min density ", min_rho));

    if (g->dim() == 2 && s0.min_density(params.pbar) > 0.0) {
        const double e3 = energy_E3_D3(s0, params).first, e4 = energy_E4_D4(s0, params).first;
        const double h1 = compute_H1(s0, params), h2 = compute_H2(s0, params);
        const double gap = std::max(std::abs(e3 - h1) / std::max(std::abs(h1), 1e-300),
                                    std::abs(e4 - h2) / std::max(std::abs(h2), 1e-300));
        add("energy identities at t = 0", gap <= 1e-10, fmt("relative gap ", gap));
    }
    return out;
}

}  // namespace bll
