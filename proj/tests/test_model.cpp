#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bll/errors.hpp"
#include "bll/fft.hpp"
#include "bll/init.hpp"
#include "bll/model.hpp"
#include "bll/norms.hpp"
#include "bll/spectral_ops.hpp"

using namespace bll;
using std::numbers::pi;

namespace {

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

ModelParams params_for(int dim, double eps, double pbar) {
    ModelParams mp;
    mp.dim = dim;
    mp.epsilon = eps;
    mp.pbar = pbar;
    return mp;
}

}  // namespace

TEST(Params, Validation) {
    ModelParams mp;
    EXPECT_NO_THROW(mp.validate());
    mp.epsilon = -1;
    mp.pbar = 0;
    try {
        mp.validate();
        FAIL();
    } catch (const ValidationError& e) {
        std::string m = e.what();
        EXPECT_NE(m.find("epsilon"), std::string::npos);
        EXPECT_NE(m.find("pbar"), std::string::npos);
    }
    ModelParams neg;
    neg.chi = -1.0;
    EXPECT_THROW(neg.validate(), ValidationError);
}

TEST(Rhs, Equilibrium) {
    auto g = make_grid(2, 16, 2 * pi);
    auto r = rhs(State::zero(g), params_for(2, 0.3, 2.0));
    EXPECT_EQ(r.lin_p.max_abs(), 0.0);
    EXPECT_EQ(r.nl_p.max_abs(), 0.0);
    for (int a = 0; a < 2; ++a) {
        EXPECT_EQ(r.lin_v[a].max_abs(), 0.0);
        EXPECT_EQ(r.nl_v[a].max_abs(), 0.0);
    }
}

TEST(Rhs, SymbolicExamples) {
    auto g = make_grid(1, 32, 2 * pi);
    const double pbar = 1.7;
    // p = 0, v = d/dx sin x, eps = 0: p_t = pbar * (-sin x), v_t = 0
    State s(ScalarField(g), VectorField({sample(g, [](auto x) { return std::cos(x[0]); })}));
    auto r = rhs(s, params_for(1, 0.0, pbar));
    EXPECT_LT(max_diff(r.lin_p + r.nl_p, sample(g, [&](auto x) { return -pbar * std::sin(x[0]); })), 1e-12);
    EXPECT_LT((r.lin_v[0] + r.nl_v[0]).max_abs(), 1e-12);

    // p = a sin x, v = 0: p_t = -a sin x, v_t = a cos x
    const double a = 0.3;
    State s2(sample(g, [&](auto x) { return a * std::sin(x[0]); }), VectorField(g));
    auto r2 = rhs(s2, params_for(1, 0.2, pbar));
    EXPECT_LT(max_diff(r2.lin_p + r2.nl_p, sample(g, [&](auto x) { return -a * std::sin(x[0]); })), 1e-12);
    EXPECT_LT(max_diff(r2.lin_v[0] + r2.nl_v[0], sample(g, [&](auto x) { return a * std::cos(x[0]); })), 1e-12);
}

TEST(Rhs, NonlinearTermsAgainstAnalytic) {
    // p = a cos x, v = b sin x on 1D: div(p v) = a b cos 2x, grad |v|^2 = b^2 sin 2x
    auto g = make_grid(1, 32, 2 * pi);
    const double a = 0.2, b = 0.5, eps = 0.3, pbar = 1.0;
    State s(sample(g, [&](auto x) { return a * std::cos(x[0]); }),
            VectorField({sample(g, [&](auto x) { return b * std::sin(x[0]); })}));
    auto r = rhs(s, params_for(1, eps, pbar));
    auto want_p = sample(g, [&](auto x) { return a * b * std::cos(2 * x[0]) + pbar * b * std::cos(x[0]); });
    auto want_v = sample(g, [&](auto x) { return -a * std::sin(x[0]) - eps * b * b * std::sin(2 * x[0]); });
    EXPECT_LT(max_diff(r.nl_p, want_p), 1e-12);
    EXPECT_LT(max_diff(r.nl_v[0], want_v), 1e-12);
    EXPECT_LT(max_diff(r.lin_v[0], sample(g, [&](auto x) { return -eps * b * std::sin(x[0]); })), 1e-12);
}

TEST(Rhs, CurlFreeTendencyAndMeans) {
    auto g = make_grid(2, 32, 2 * pi);
    State s = init_manufactured(g, 7, 0.2, 1.0);
    ASSERT_LE(curl_norm(s.v), 1e-12);
    auto r = rhs(s, params_for(2, 0.1, 1.0));
    EXPECT_LE(curl_norm(r.lin_v + r.nl_v), 1e-11);
    EXPECT_LE(std::abs(forward(r.lin_p + r.nl_p)[0]), 1e-13);
    for (int a = 0; a < 2; ++a) EXPECT_LE(std::abs(forward(r.lin_v[a] + r.nl_v[a])[0]), 1e-13);
}

TEST(Eigenvalues, Examples) {
    ModelParams mp;
    auto [a, b] = eigenvalues_1d(1.0, 0.0, mp);
    EXPECT_DOUBLE_EQ(a, -1.0);
    EXPECT_DOUBLE_EQ(b, 1.0);
    std::tie(a, b) = eigenvalues_1d(2.0, 1.0, mp);
    EXPECT_DOUBLE_EQ(a, -2.0);
    EXPECT_DOUBLE_EQ(b, 1.0);
    mp.epsilon = 0.5;  // 2 eps / chi = 1
    std::tie(a, b) = eigenvalues_1d(4.0, 3.7, mp);
    EXPECT_DOUBLE_EQ(a, -2.0);
    EXPECT_DOUBLE_EQ(b, 2.0);
    EXPECT_THROW(eigenvalues_1d(0.0, 1.0, mp), ValidationError);
}

TEST(ColeHopf, Forward) {
    auto g = make_grid(1, 64, 2 * pi);
    EXPECT_LT(cole_hopf_forward(ScalarField(g, 3.0), 0.0, 0.0)[0].max_abs(), 1e-14);
    auto V = cole_hopf_forward(sample(g, [](auto x) { return std::exp(std::sin(x[0])); }), 0.5, 1.0);
    EXPECT_LT(max_diff(V[0], sample(g, [](auto x) { return std::cos(x[0]); })), 1e-12);
    auto V2 = cole_hopf_forward(sample(g, [](auto x) { return 1.0 + 0.1 * std::sin(x[0]); }), 0.0, 0.0);
    EXPECT_LT(max_diff(V2[0], sample(g, [](auto x) { return 0.1 * std::cos(x[0]) / (1.0 + 0.1 * std::sin(x[0])); })),
              1e-10);
    EXPECT_THROW(cole_hopf_forward(sample(g, [](auto x) { return std::sin(x[0]); }), 0, 0), NonPositiveConcentration);
}

TEST(ColeHopf, Inverse) {
    auto g = make_grid(2, 32, 2 * pi);
    auto c = cole_hopf_inverse(VectorField(g), 0.0, 0.0, 2.0);
    EXPECT_LT(max_diff(c, ScalarField(g, 2.0)), 1e-14);
    auto c2 = cole_hopf_inverse(VectorField(g), 1.0, std::log(2.0), 2.0);
    EXPECT_LT(max_diff(c2, ScalarField(g, 1.0)), 1e-14);
    auto V = gradient(sample(g, [](auto x) { return 0.3 * std::sin(x[0]) * std::cos(x[1]); }));
    auto back = cole_hopf_forward(cole_hopf_inverse(V, 0.2, 0.7, 1.5), 0.2, 0.7);
    for (int a = 0; a < 2; ++a) EXPECT_LT(max_diff(back[a], V[a]), 1e-9);
}

TEST(Rescale, Examples) {
    ModelParams mp;
    auto r = rescale_to_clean(mp);
    EXPECT_DOUBLE_EQ(r.time_factor, 1.0);
    EXPECT_DOUBLE_EQ(r.space_factor, 1.0);
    EXPECT_DOUBLE_EQ(r.v_factor, -1.0);
    mp.chi = 4, mp.mu = 1, mp.diff = 2;
    r = rescale_to_clean(mp);
    EXPECT_DOUBLE_EQ(r.time_factor, 2.0);
    EXPECT_DOUBLE_EQ(r.space_factor, 1.0);
    EXPECT_DOUBLE_EQ(r.v_factor, -2.0);
    mp.chi = -1, mp.mu = -1, mp.diff = 1;
    r = rescale_to_clean(mp);
    EXPECT_DOUBLE_EQ(r.v_factor, 1.0);
    mp.diff = 0;
    EXPECT_THROW(rescale_to_clean(mp), ValidationError);
}

TEST(Scaling, IdentityAndNormLaws) {
    auto g = make_grid(2, 32, 4 * pi);
    State s = init_manufactured(g, 3, 0.1, 1.0);
    State same = scale_solution(s, 1.0, g);
    EXPECT_LT(max_diff(same.p, s.p), 1e-15);

    const double xi = 2.0;
    State sx = scale_solution(s, xi, make_grid(2, 32, 2 * pi));
    double p0 = norm_l2(s.p), px = norm_l2(sx.p);
    EXPECT_NEAR(px * px, std::pow(xi, 4 - 2) * p0 * p0, 1e-6 * p0 * p0 * 4);

    auto g3 = make_grid(3, 16, 6.0);
    State s3 = init_manufactured(g3, 5, 0.1, 1.0);
    const double xi3 = 1.5;
    State s3x = scale_solution(s3, xi3, make_grid(3, 16, 4.0));
    double v0 = norm_l2(s3.v), vx = norm_l2(s3x.v);
    EXPECT_NEAR(vx * vx, std::pow(xi3, 2 - 3) * v0 * v0, 1e-6 * v0 * v0);
    EXPECT_THROW(scale_solution(s3, xi3, g3), ValidationError);
    EXPECT_DOUBLE_EQ(scale_params(params_for(3, 0.1, 2.0), xi3).pbar, 2.0 * xi3 * xi3);
}

TEST(Scaling, ResampleOntoFinerGrid) {
    auto g = make_grid(1, 32, 2 * pi);
    State s(sample(g, [](auto x) { return std::sin(3 * x[0]); }), VectorField(g));
    State f = scale_solution(s, 1.0, make_grid(1, 64, 2 * pi));
    auto g64 = f.grid();
    EXPECT_LT(max_diff(f.p, sample(g64, [](auto x) { return std::sin(3 * x[0]); })), 1e-13);
}

TEST(Appendix3D, ProfileAndSupport) {
    const int n = 1;
    // spacing chosen so that a node sits at r = 3 n pi along x
    auto g = make_grid(3, 64, 12 * pi);
    State s = init_appendix_3d(n, 1.0, g);
    auto oracle = [&](double r) {
        if (r < 2 * n * pi || r > 4 * n * pi) return 0.0;
        return std::pow(n, -1.25) * (std::sin(r / n - pi / 2) + 1.0);
    };
    double worst = 0.0, outside_v = 0.0, vmax = s.v.magnitude().max_abs();
    ScalarField vm = s.v.magnitude();
    for_each_node(*g, [&](std::size_t i, const std::array<double, 3>& x) {
        double r = std::sqrt(std::pow(x[0] - 6 * pi, 2) + std::pow(x[1] - 6 * pi, 2) + std::pow(x[2] - 6 * pi, 2));
        worst = std::max(worst, std::abs(s.p[i] - oracle(r)));
        if (r < 2 * n * pi - 2 * g->spacing() || r > 4 * n * pi + 2 * g->spacing())
            outside_v = std::max(outside_v, vm[i]);
    });
    EXPECT_LT(worst, 1e-12);
    // node at (6 pi + 3 pi, 6 pi, 6 pi) is index (48, 32, 32)
    std::size_t idx = (48u * 64u + 32u) * 64u + 32u;
    EXPECT_NEAR(s.p[idx], 2.0 * std::pow(n, -1.25), 1e-12);
    EXPECT_LT(curl_norm(s.v), 1e-8);
    EXPECT_LT(outside_v, 0.05 * vmax);
    EXPECT_THROW(init_appendix_3d(2, 1.0, g), DomainTooSmall);
    EXPECT_THROW(init_appendix_3d(1, 1.0, make_grid(2, 16, 100.0)), ValidationError);
}

TEST(Appendix3D, VelocityMatchesRadialProfile) {
    const int n = 2;
    auto g = make_grid(3, 64, 10 * n * pi);
    State s = init_appendix_3d(n, 1.0, g);
    const double c = 5 * n * pi;
    double err = 0.0, peak = 0.0;
    for_each_node(*g, [&](std::size_t i, const std::array<double, 3>& x) {
        double d[3] = {x[0] - c, x[1] - c, x[2] - c};
        double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        double prof = (r < 2 * n * pi || r > 4 * n * pi) ? 0.0 : std::pow(n, -1.25) * (1 - std::cos(r / n));
        for (int a = 0; a < 3; ++a) {
            double want = r > 0 ? prof * d[a] / r : 0.0;
            err = std::max(err, std::abs(s.v[a][i] - want));
            peak = std::max(peak, std::abs(want));
        }
    });
    EXPECT_LT(err, 0.02 * peak);
}

TEST(Appendix2D, SupportCurlAndGuards) {
    const double sfac = kDefaultFScale;
    EXPECT_NEAR(appendix2d_f(2, sfac), 32.0, 1e-12);
    EXPECT_THROW(appendix2d_f(3, sfac), OverflowGuard);
    EXPECT_THROW(appendix2d_f(3, 1.0), OverflowGuard);

    double f1 = appendix2d_f(1, sfac);
    auto g = make_grid(2, 256, 10 * pi * f1);
    State s = init_appendix_2d(1, 1.0, sfac, g);
    EXPECT_LT(curl_norm(s.v), 1e-8);
    double outside = 0.0;
    for_each_node(*g, [&](std::size_t i, const std::array<double, 3>& x) {
        double r = std::hypot(x[0] - 5 * pi * f1, x[1] - 5 * pi * f1);
        if (r < 2 * pi * f1 || r > 4 * pi * f1) outside = std::max(outside, std::abs(s.p[i]));
    });
    EXPECT_EQ(outside, 0.0);
    EXPECT_THROW(init_appendix_2d(2, 1.0, sfac, g), DomainTooSmall);
}

TEST(Appendix2D, MassRatio) {
    double norms[2];
    for (int n = 1; n <= 2; ++n) {
        double f = appendix2d_f(n, kDefaultFScale);
        auto g = make_grid(2, 256, 10 * pi * f);
        State s = init_appendix_2d(n, 1.0, kDefaultFScale, g);
        norms[n - 1] = std::pow(norm_l2(s.p), 2);
    }
    EXPECT_NEAR(norms[1] / norms[0], 4.0, 1.0);
    EXPECT_NEAR(norms[1] / norms[0], 4.0, 1e-6);
}

TEST(Manufactured, Properties) {
    auto g = make_grid(2, 64, 2 * pi);
    State z = init_manufactured(g, 1, 0.0, 1.0);
    EXPECT_EQ(z.p.max_abs(), 0.0);
    State a = init_manufactured(g, 42, 0.1, 1.0);
    State b = init_manufactured(g, 42, 0.1, 1.0);
    EXPECT_EQ(a.p.values, b.p.values);
    EXPECT_EQ(a.v[1].values, b.v[1].values);
    State c = init_manufactured(g, 43, 0.1, 1.0);
    EXPECT_NE(a.p.values, c.p.values);
    EXPECT_LE(curl_norm(a.v), 1e-12);
    EXPECT_NEAR(a.p.max_abs(), 0.1, 1e-15);
    EXPECT_NEAR(a.v.magnitude().max_abs(), 0.1, 1e-15);
    EXPECT_LT(std::abs(a.p.mean()), 1e-15);
    // band limit: nothing above points/8
    Spectrum s = forward(a.p);
    double out = 0.0;
    for_each_mode(*g, [&](std::size_t i, const Mode& m) {
        if (std::abs(m.m[0]) > 8 || std::abs(m.m[1]) > 8) out = std::max(out, std::abs(s[i]));
    });
    EXPECT_LT(out, 1e-15);
    EXPECT_THROW(init_manufactured(g, 42, 5.0, 1.0), PositivityViolation);
}
