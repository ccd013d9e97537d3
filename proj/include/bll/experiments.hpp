#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bll/diagnostics.hpp"
#include "bll/integrator.hpp"

namespace bll {

struct SweepResult {
    std::vector<double> epsilons;  // strictly decreasing, all > 0
    double t_probe = 0.0;
    double dt = 0.0;
    std::vector<double> diff_h1_sq;   // ||(p^eps - p^0, v^eps - v^0)||^2_{H^1}
    std::vector<double> diff_lap_sq;  // ||(Lap(p^eps - p^0), Lap(v^eps - v^0))||^2
    std::vector<bool> failed;
    std::vector<std::string> errors;
    double slope_h1 = 0.0;
    double slope_lap = 0.0;
    std::array<double, 2> fitted_prefactors{0.0, 0.0};
    int fitted_points = 0;
};

/// Runs every epsilon and the epsilon = 0 reference from the same data with a
/// shared dt (the CFL step of the largest epsilon when AUTO), then fits
/// log(diff) = slope log(eps) + log(prefactor). Needs >= 3 positive epsilons.
SweepResult diffusion_limit_sweep(const State& base, const ModelParams& params0, std::vector<double> epsilons,
                                  double t_probe, const StepperConfig& stepper);

struct DecayResult {
    std::vector<double> times;
    std::vector<double> grad_norm_sq;  // ||grad p||^2 + ||div v||^2
    std::vector<double> winf_norm;     // node-max proxy of ||(p, v)||_{W^{1,inf}}
    double ratio_final = 0.0;
    bool degenerate = false;           // initial gradient energy is zero
    bool smallness_passed = true;
};

DecayResult decay_experiment(const State& s0, const ModelParams& params, const StepperConfig& stepper, double t_end,
                             const GNConstants& gn = {});

/// True when the moving average over `window` samples never increases after
/// the first `transient` fraction of the time span.
bool smoothed_nonincreasing(const std::vector<double>& times, const std::vector<double>& values,
                            double transient = 0.1, int window = 5);

enum class Family { Appendix3D, Appendix2D };

struct GridPolicy {
    int points = 0;              // 0 picks 128 (3D) or 1024 (2D)
    double length_factor = 0.0;  // L = factor * pi * scale; 0 picks 10
    double f_scale = 0.0;        // 2D exponent scale; 0 picks the default
};

struct FitLine {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root-mean-square deviation in log space
};

struct ScalingTable {
    Family family = Family::Appendix3D;
    std::vector<int> n_list;
    std::map<std::string, std::vector<double>> values;
    std::map<std::string, FitLine> exponents;
    std::vector<std::string> errors;  // per-n failures (DomainTooSmall, OverflowGuard)
};

/// Evaluates each member of the family on its own grid and fits log-log
/// exponents in n. pbar (B or A) comes from params.
ScalingTable appendix_scaling_experiment(Family family, const std::vector<int>& n_list, const ModelParams& params,
                                         const GridPolicy& policy = {});

struct MmsResult {
    std::vector<double> dts;
    std::vector<double> time_errors;
    std::vector<double> time_ratios;  // consecutive error ratios
    double time_order = 0.0;          // min log2 ratio
    std::vector<int> points;
    std::vector<double> space_errors;
    double space_ratio = 0.0;         // error(points[0]) / error(points[1])
    double zero_forcing_error = 0.0;
};

struct MmsOptions {
    double dt0 = 0.1;
    int levels = 4;  // dt0, dt0/2, ... (levels - 1 halvings)
    double t_end = 1.0;
    double epsilon = 0.1;
    double pbar = 1.0;
    std::vector<int> space_points{32, 64};
    double space_dt = 1e-4;
    double space_t_end = 0.2;
};

/// Manufactured-solution study on the one-dimensional torus of length 2 pi.
MmsResult mms_order_experiment(Scheme scheme, const MmsOptions& options = {});

/// Least-squares line through (log x, log y).
FitLine fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Worker cap from BLL_THREADS (defaults to hardware concurrency, at least 1).
unsigned worker_limit();

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Manufactured-solution orders plus the structural invariants on a short run
/// of the given initial state.
std::vector<CheckResult> verify_suite(const State& s0, const ModelParams& params, const StepperConfig& stepper,
                                      const GNConstants& gn = {});

}  // namespace bll
