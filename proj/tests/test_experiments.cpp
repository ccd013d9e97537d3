#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bll/errors.hpp"
#include "bll/experiments.hpp"
#include "bll/init.hpp"
#include "bll/norms.hpp"

using namespace bll;

TEST(FitLoglog, RecoversPowerLaw) {
    std::vector<double> x{1, 2, 4, 8}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
    FitLine f = fit_loglog(x, y);
    EXPECT_NEAR(f.slope, -1.5, 1e-12);
    EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
    EXPECT_LT(f.residual, 1e-12);
    EXPECT_THROW(fit_loglog({1.0}, {1.0}), ValidationError);
}

TEST(Smoothed, MonotoneAfterTransient) {
    std::vector<double> t, v;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(i * 0.01);
        v.push_back(std::exp(-t.back()) * (1 + 0.01 * std::sin(40.0 * i)) + (i < 5 ? 1.0 * i : 0.0));
    }
    EXPECT_TRUE(smoothed_nonincreasing(t, v, 0.1, 5));
    v[80] += 1.0;
    EXPECT_FALSE(smoothed_nonincreasing(t, v, 0.1, 5));
}

TEST(Mms, CnabIsSecondOrderAndSpectral) {
    MmsResult r = mms_order_experiment(Scheme::CNAB2);
    for (double q : r.time_ratios) std::printf("  cnab2 ratio %.4f\n", q);
    std::printf("  space ratio %.3e  zero %.3e\n", r.space_ratio, r.zero_forcing_error);
    EXPECT_GE(r.time_order, 1.9);
    EXPECT_GE(r.space_ratio, 100.0);
    EXPECT_LE(r.zero_forcing_error, 1e-14);
}

TEST(Mms, EulerIsFirstOrder) {
    MmsResult r = mms_order_experiment(Scheme::IMEXEuler);
    std::printf("  euler order %.4f\n", r.time_order);
    EXPECT_GT(r.time_order, 0.9);
    EXPECT_LT(r.time_order, 1.2);
}

TEST(Sweep, SlopesAndValidation) {
    auto g = make_grid(1, 64, 2 * std::numbers::pi);
    State s0 = init_manufactured(g, 3, 0.1, 1.0);
    ModelParams mp;
    StepperConfig cfg;
    EXPECT_THROW(diffusion_limit_sweep(s0, mp, {0.1, 0.05}, 0.5, cfg), ValidationError);
    EXPECT_THROW(diffusion_limit_sweep(s0, mp, {0.1, 0.05, 0.0}, 0.5, cfg), ValidationError);
    SweepResult r = diffusion_limit_sweep(s0, mp, {0.0125, 0.1, 0.05, 0.025}, 0.5, cfg);
    EXPECT_DOUBLE_EQ(r.epsilons.front(), 0.1);
    EXPECT_EQ(r.fitted_points, 4);
    for (std::size_t i = 1; i < r.epsilons.size(); ++i) EXPECT_LE(r.diff_h1_sq[i], r.diff_h1_sq[i - 1] * 1.01);
}

TEST(Sweep, TwoDimensionalRates) {
    auto g = make_grid(2, 32, 2 * std::numbers::pi);
    State s0 = init_manufactured(g, 21, 0.05, 1.0);
    ModelParams mp;
    mp.dim = 2;
    SweepResult r = diffusion_limit_sweep(s0, mp, {0.02, 0.01, 0.005, 0.0025}, 1.0, StepperConfig{});
    std::printf("  slopes h1 %.4f lap %.4f (%d points)\n", r.slope_h1, r.slope_lap, r.fitted_points);
    EXPECT_GE(r.slope_h1, 1.7);
    EXPECT_LE(r.slope_h1, 2.3);
    EXPECT_GE(r.slope_lap, 0.9);
    EXPECT_LE(r.slope_lap, 2.1);
}

TEST(Decay, GradientEnergyDecays) {
    auto g = make_grid(2, 32, 2 * std::numbers::pi);
    State s0 = init_manufactured(g, 11, 0.01, 1.0);
    ModelParams mp;
    mp.dim = 2;
    mp.epsilon = 0.1;
    StepperConfig cfg;
    cfg.report_every = 5;
    DecayResult r = decay_experiment(s0, mp, cfg, 2.0);
    EXPECT_FALSE(r.degenerate);
    EXPECT_LT(r.ratio_final, 0.5);
    EXPECT_TRUE(smoothed_nonincreasing(r.times, r.grad_norm_sq));
    EXPECT_GT(r.winf_norm.front(), r.winf_norm.back());

    DecayResult z = decay_experiment(State::zero(g), mp, cfg, 0.1);
    EXPECT_TRUE(z.degenerate);
}

TEST(Scaling, TwoDimensionalMassRatio) {
    ModelParams mp;
    mp.pbar = 1.0;
    GridPolicy pol;
    pol.points = 256;
    ScalingTable t = appendix_scaling_experiment(Family::Appendix2D, {1, 2, 3}, mp, pol);
    ASSERT_EQ(t.n_list.size(), 2u);
    EXPECT_EQ(t.errors.size(), 1u);  // n = 3 overflows the domain cap
    EXPECT_NEAR(t.values["p_sq"][1] / t.values["p_sq"][0], 4.0, 1e-3);
}

TEST(Verify, SuitePassesOnSmallData) {
    auto g = make_grid(2, 32, 2 * std::numbers::pi);
    State s0 = init_manufactured(g, 5, 0.05, 1.0);
    ModelParams mp;
    mp.dim = 2;
    mp.epsilon = 0.1;
    StepperConfig cfg;
    cfg.t_end = 0.2;
    for (const auto& c : verify_suite(s0, mp, cfg)) {
        std::printf("  %-28s %s  %s\n", c.name.c_str(), c.passed ? "ok" : "FAIL", c.detail.c_str());
        EXPECT_TRUE(c.passed) << c.name;
    }
}
