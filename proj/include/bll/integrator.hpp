#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bll/diagnostics.hpp"
#include "bll/model.hpp"

namespace bll {

enum class Scheme { CNAB2, IMEXEuler };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct StepperConfig {
    Scheme scheme = Scheme::CNAB2;
    std::optional<double> dt;  // nullopt means AUTO (CFL from the initial data)
    double cfl_safety = 0.4;
    double t_end = 1.0;
    int report_every = 1;
    double positivity_floor = 0.0;
    /// Test hook: drops the quadratic terms of the flux.
    bool linearized = false;
    /// Test hook: keeps v fixed at its initial value.
    bool freeze_velocity = false;

    void validate() const;
};

/// Extra explicit tendency f(t) added to both equations (spectral).
using Forcing = std::function<SpectralState(double t)>;

/// dt = safety * spacing / max |lambda_pm(P, |v|)|, evaluated for the
/// normalised system that the solver integrates.
double cfl_dt(const State& s, const ModelParams& params, double safety);

/// Fourier-diagonal IMEX stepper holding the state in spectral space.
class ImexStepper {
  public:
    ImexStepper(const State& s0, const ModelParams& params, const StepperConfig& config, double dt,
                Forcing forcing = {});

    /// Advances one step of size dt. Throws SolverError on non-finite values
    /// and PositivityViolation when min(p + pbar) <= positivity_floor.
    void step();
    State state() const;
    double time() const { return time_; }
    double dt() const { return dt_; }
    long steps_taken() const { return steps_; }

  private:
    SpectralState explicit_tendency(const SpectralState& u, double t) const;
    void euler_substep(double h);
    void check_state() const;

    ModelParams params_;
    StepperConfig config_;
    double dt_;
    Forcing forcing_;
    SpectralState u_;
    std::optional<SpectralState> prev_tendency_;
    double time_;
    long steps_ = 0;
};

/// One IMEX step of size dt from s (IMEX-Euler for the first CNAB2 step).
State step(const State& s, double dt, const ModelParams& params, const StepperConfig& config);

struct TrajectorySample {
    double time = 0.0;
    EnergyReport report;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<State> states;  // filled when RunOptions::store_states
    double dt = 0.0;
    long steps = 0;
};

using Observer = std::function<void(const State&, long step)>;

struct RunOptions {
    GNConstants gn;
    bool store_states = false;
    bool compute_reports = true;
    Forcing forcing;
};

/// Integrates to config.t_end. dt (explicit or AUTO) is shrunk so that an
/// integer number of steps lands on t_end exactly. Observers and reports
/// fire at step 0 and every report_every steps, and at the final step.
Trajectory run(const State& s0, const ModelParams& params, const StepperConfig& config,
               const std::vector<Observer>& observers = {}, const RunOptions& options = {});

/// Number of steps and the adjusted step for a horizon.
std::pair<long, double> plan_steps(double t_end, double dt);

/// Resolves config.dt (AUTO via cfl_dt) for the given initial state.
double resolve_dt(const State& s0, const ModelParams& params, const StepperConfig& config);

}  // namespace bll
