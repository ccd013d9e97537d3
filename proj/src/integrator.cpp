#include "bll/integrator.hpp"

#include <cmath>
#include <sstream>

#include "bll/errors.hpp"
#include "bll/fft.hpp"

namespace bll {

const char* scheme_name(Scheme s) { return s == Scheme::CNAB2 ? "cnab2" : "imex-euler"; }

Scheme parse_scheme(const std::string& name) {
    if (name == "cnab2" || name == "CNAB2") return Scheme::CNAB2;
    if (name == "imex-euler" || name == "IMEX-Euler" || name == "euler") return Scheme::IMEXEuler;
    throw ValidationError("unknown scheme '" + name + "' (expected cnab2 or imex-euler)");
}

void StepperConfig::validate() const {
    std::vector<std::string> bad;
    if (dt && !(*dt > 0.0 && std::isfinite(*dt))) bad.push_back("dt must be > 0 or AUTO");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) bad.push_back("cfl_safety must be in (0, 1]");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) bad.push_back("t_end must be >= 0");
    if (report_every < 1) bad.push_back("report_every must be >= 1");
    if (!(positivity_floor >= 0.0)) bad.push_back("positivity_floor must be >= 0");
    if (bad.empty()) return;
    std::string msg = "invalid stepper config:";
    for (auto& b : bad) msg += " " + b + ";";
    throw ValidationError(msg);
}

double cfl_dt(const State& s, const ModelParams& params, double safety) {
    if (!(safety > 0.0 && safety <= 1.0)) throw ValidationError("cfl safety must be in (0, 1]");
    const double m = s.min_density(params.pbar);
    if (!(m > 0.0)) {
        std::ostringstream msg;
        msg << "cfl_dt: min(p + pbar) = " << m;
        throw PositivityViolation(msg.str());
    }
    ModelParams clean = params;
    clean.chi = clean.mu = clean.diff = 1.0;
    ScalarField vmag = s.v.magnitude();
    double lmax = 0.0;
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        auto [lm, lp] = eigenvalues_1d(s.p[i] + params.pbar, vmag[i], clean);
        lmax = std::max({lmax, std::abs(lm), std::abs(lp)});
    }
    return safety * s.grid()->spacing() / lmax;
}

ImexStepper::ImexStepper(const State& s0, const ModelParams& params, const StepperConfig& config, double dt,
                         Forcing forcing)
    : params_(params), config_(config), dt_(dt), forcing_(std::move(forcing)), u_(to_spectral(s0)),
      time_(s0.time) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("step size must be positive");
    if (!s0.all_finite()) throw SolverError("initial state is not finite");
}

SpectralState ImexStepper::explicit_tendency(const SpectralState& u, double t) const {
    SpectralState n = flux_tendency(u, params_, config_.linearized);
    if (forcing_) {
        SpectralState f = forcing_(t);
        for (std::size_t i = 0; i < n.p.size(); ++i) n.p.data[i] += f.p.data[i];
        for (std::size_t a = 0; a < n.v.size(); ++a)
            for (std::size_t i = 0; i < n.p.size(); ++i) n.v[a].data[i] += f.v[a].data[i];
    }
    return n;
}

void ImexStepper::euler_substep(double h) {
    SpectralState n = explicit_tendency(u_, time_);
    if (!prev_tendency_ && config_.scheme == Scheme::CNAB2) prev_tendency_ = n;
    const double e = params_.epsilon;
    for_each_mode(*u_.p.grid, [&](std::size_t i, const Mode& m) {
        u_.p.data[i] = (u_.p.data[i] + h * n.p.data[i]) / (1.0 + h * m.k2);
        if (config_.freeze_velocity) return;
        const double mv = 1.0 / (1.0 + h * e * m.k2);
        for (std::size_t a = 0; a < u_.v.size(); ++a) u_.v[a].data[i] = (u_.v[a].data[i] + h * n.v[a].data[i]) * mv;
    });
    time_ += h;
}

void ImexStepper::step() {
    const double t0 = time_;
    if (config_.scheme == Scheme::IMEXEuler) {
        euler_substep(dt_);
    } else if (steps_ == 0) {
        // bootstrap: four IMEX-Euler steps of dt/4; the tendency at t0 is kept
        for (int k = 0; k < 4; ++k) euler_substep(0.25 * dt_);
    } else {
        SpectralState n = explicit_tendency(u_, time_);
        const SpectralState& o = *prev_tendency_;
        const double h = dt_, e = params_.epsilon;
        for_each_mode(*u_.p.grid, [&](std::size_t i, const Mode& m) {
            const double ap = 0.5 * h * m.k2, av = 0.5 * h * e * m.k2;
            u_.p.data[i] = ((1.0 - ap) * u_.p.data[i] + h * (1.5 * n.p.data[i] - 0.5 * o.p.data[i])) / (1.0 + ap);
            if (config_.freeze_velocity) return;
            for (std::size_t a = 0; a < u_.v.size(); ++a)
                u_.v[a].data[i] =
                    ((1.0 - av) * u_.v[a].data[i] + h * (1.5 * n.v[a].data[i] - 0.5 * o.v[a].data[i])) / (1.0 + av);
        });
        prev_tendency_ = std::move(n);
        time_ += h;
    }
    ++steps_;
    // stamp the nominal time so that long runs do not drift
    time_ = t0 + dt_;
    check_state();
}

void ImexStepper::check_state() const {
    const Grid& g = *u_.p.grid;
    std::vector<double> p(g.size());
    inverse_into(g, u_.p.data.data(), p.data());
    double pmin = INFINITY;
    for (double x : p) {
        if (!std::isfinite(x)) {
            std::ostringstream msg;
            msg << "non-finite density at t = " << time_;
            throw SolverError(msg.str());
        }
        pmin = std::min(pmin, x);
    }
    for (const auto& c : u_.v)
        for (const auto& z : c.data)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                std::ostringstream msg;
                msg << "non-finite velocity at t = " << time_;
                throw SolverError(msg.str());
            }
    if (!(pmin + params_.pbar > config_.positivity_floor)) {
        std::ostringstream msg;
        msg << "min(p + pbar) = " << pmin + params_.pbar << " <= floor " << config_.positivity_floor
            << " at t = " << time_;
        throw PositivityViolation(msg.str());
    }
}

State ImexStepper::state() const { return from_spectral(u_, time_); }

State step(const State& s, double dt, const ModelParams& params, const StepperConfig& config) {
    ImexStepper st(s, params, config, dt);
    st.step();
    return st.state();
}

std::pair<long, double> plan_steps(double t_end, double dt) {
    if (t_end <= 0.0) return {0, dt};
    long n = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    if (n < 1) n = 1;
    return {n, t_end / static_cast<double>(n)};
}

double resolve_dt(const State& s0, const ModelParams& params, const StepperConfig& config) {
    return config.dt ? *config.dt : cfl_dt(s0, params, config.cfl_safety);
}

Trajectory run(const State& s0, const ModelParams& params, const StepperConfig& config,
               const std::vector<Observer>& observers, const RunOptions& options) {
    params.validate();
    config.validate();
    Trajectory traj;
    auto record = [&](const State& s, long k) {
        for (const auto& ob : observers) ob(s, k);
        if (options.compute_reports) traj.samples.push_back({s.time, norm_report(s, params, options.gn)});
        else traj.samples.push_back({s.time, EnergyReport{}});
        if (options.store_states) traj.states.push_back(s);
    };
    const double dt0 = resolve_dt(s0, params, config);
    auto [nsteps, dt] = plan_steps(config.t_end, dt0);
    traj.dt = dt;
    record(s0, 0);
    if (nsteps == 0) return traj;

    ImexStepper stepper(s0, params, config, dt, options.forcing);
    const double t_start = s0.time;
    for (long k = 1; k <= nsteps; ++k) {
        stepper.step();
        if (k % config.report_every == 0 || k == nsteps) {
            State s = stepper.state();
            s.time = t_start + static_cast<double>(k) * dt;
            record(s, k);
        }
    }
    traj.steps = nsteps;
    return traj;
}

}  // namespace bll
