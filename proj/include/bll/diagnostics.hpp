#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bll/model.hpp"

namespace bll {

/// Interpolation constants. c4 and c5 are derived from c1..c3 and checked
/// by validate().
struct GNConstants {
    double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 4.0, c5 = 10.0;
    double d1 = 1.0, d2 = 1.0, d3 = 1.0, d4 = 1.0, d5 = 1.0;

    static double derived_c4(double c1, double c2, double c3);
    static double derived_c5(double c1, double c2, double c3);
    /// Builds a consistent set with c4, c5 recomputed.
    static GNConstants from_base(double c1, double c2, double c3, double d1, double d2, double d3, double d4,
                                 double d5);
    void validate() const;
};

/// Norms of the initial data entering the higher-order constants.
struct InitialNorms3D {
    double p_h1_sq = 0.0;       // ||p||^2_{H^1}
    double v_h1_sq = 0.0;       // ||v||^2_{H^1}
    double lap_p_sq = 0.0;      // ||Lap p||^2
    double lap_v_sq = 0.0;      // ||Lap v||^2
    double grad_lap_p_sq = 0.0; // ||grad Lap p||^2
    double lap_div_v_sq = 0.0;  // ||Lap div v||^2
};

struct SmallnessReport3D {
    double kappa = 0.0, N1 = 1.0, N2 = 1.0, N3 = 1.0, Nhat = 0.0;
    double threshold = 0.0;
    bool condition_ok = false;
};

struct SmallnessReport2D {
    double H1 = 0.0, H2 = 0.0, M1 = 1.0, delta = 0.0;
    double k1 = 0.25, k2 = 0.0;
    std::array<double, 8> B{};  // B_1..B_8
    std::array<double, 3> C{};  // C_1..C_3
    std::array<double, 8> D{};  // D_1..D_8
    std::array<bool, 8> B_ok{};
    std::array<bool, 8> D_ok{};  // D_ok[0] holds M1 delta^2 <= 1
    bool conditions_ok = false;
};

struct EnergyReport {
    double time = 0.0;
    double l2_p = 0.0, l2_v = 0.0;
    double h1 = 0.0, h2 = 0.0, h3 = 0.0;
    double curl = 0.0;
    double min_density = 0.0;
    double entropy = 0.0;
    double E3 = 0.0, D3 = 0.0, E4 = 0.0, D4 = 0.0, E5 = 0.0, D5 = 0.0;
    double lp4_p = 0.0, lp4_v = 0.0;
    // three-dimensional ledger evaluated on the current state
    double kappa_t = 0.0, N1_t = 1.0, N2_t = 1.0, N3_t = 1.0;
    int dim = 1;
};

/// Three consecutive snapshots equally spaced in time.
struct Window {
    const State* prev = nullptr;
    const State* mid = nullptr;
    const State* next = nullptr;

    Window(const State& a, const State& b, const State& c);
    double half_span() const;  // the time step between snapshots
};

std::pair<double, double> k_coefficients(double epsilon, double pbar);

/// Integral of E(p + pbar, pbar); p is the perturbation.
double entropy_expansion(const ScalarField& p, double pbar);
/// int E + 1/2 ||v||^2.
double entropy_total(const State& s, double pbar);
/// int |grad P|^2 / P + epsilon ||grad v||^2.
double entropy_dissipation(const State& s, const ModelParams& params);
/// epsilon int |v|^2 div v.
double entropy_source(const State& s, double epsilon);

double entropy_identity_residual_1d(const Window& w, double epsilon, double pbar);
/// (lhs, rhs) of the multi-dimensional balance; lhs includes the time derivative.
std::pair<double, double> entropy_balance_multi(const Window& w, const ModelParams& params);

std::pair<double, double> compute_kappa_N1(const State& s0, double pbar);
InitialNorms3D initial_norms_3d(const State& s0);
SmallnessReport3D smallness_check_3d(double kappa, double N1, const GNConstants& gn, double pbar,
                                     const InitialNorms3D& norms = {});
SmallnessReport3D smallness_check_3d(const State& s0, double pbar, const GNConstants& gn);

SmallnessReport2D compute_H1_H2_M1_delta(const State& s0, const ModelParams& params, const GNConstants& gn);
/// H1, H2 from the expanded (non-square) forms.
double compute_H1(const State& s0, const ModelParams& params);
double compute_H2(const State& s0, const ModelParams& params);

std::pair<double, double> energy_E3_D3(const State& s, const ModelParams& params);
std::pair<double, double> energy_E4_D4(const State& s, const ModelParams& params);
std::pair<double, double> energy_E5_D5(const State& s, const ModelParams& params);

double damping_equation_residual(const Window& w, const ModelParams& params);

EnergyReport norm_report(const State& s, const ModelParams& params, const GNConstants& gn = {});

}  // namespace bll
