#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bll/errors.hpp"
#include "bll/fft.hpp"
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

// Random trigonometric polynomial with modes up to kmax, evaluated directly at nodes.
ScalarField random_trig(GridPtr g, int kmax, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarField f(g);
    const double w = 2.0 * pi / g->length();
    for (int t = 0; t < 6; ++t) {
        int m[3] = {0, 0, 0};
        for (int a = 0; a < g->dim(); ++a) m[a] = static_cast<int>(std::lround(u(rng) * kmax));
        double amp = u(rng), ph = u(rng) * pi;
        for_each_node(*g, [&](std::size_t i, const std::array<double, 3>& x) {
            f[i] += amp * std::cos(w * (m[0] * x[0] + m[1] * x[1] + m[2] * x[2]) + ph);
        });
    }
    return f;
}

}  // namespace

TEST(Grid, Construction) {
    auto g = make_grid(1, 8, 2 * pi);
    EXPECT_DOUBLE_EQ(g->spacing(), pi / 4);
    auto g2 = make_grid(2, 128, 2 * pi);
    EXPECT_EQ(g2->size(), 128u * 128u);
    EXPECT_EQ(g2->mode(64), -64);
    EXPECT_EQ(g2->mode(63), 63);
    EXPECT_EQ(make_grid(3, 64, 40.0)->spacing(), 0.625);
    EXPECT_DOUBLE_EQ(g2->spacing() * g2->points(), g2->length());
    for (int j = 1; j < 64; ++j) EXPECT_DOUBLE_EQ(g2->wavenumber(j), -g2->wavenumber(128 - j));
}

TEST(Grid, RejectsBadInput) {
    EXPECT_THROW(make_grid(1, 12, 1.0), ValidationError);
    EXPECT_THROW(make_grid(1, 4, 1.0), ValidationError);
    EXPECT_THROW(make_grid(1, 16, 0.0), ValidationError);
    EXPECT_THROW(make_grid(1, 16, -2.0), ValidationError);
    EXPECT_THROW(make_grid(4, 16, 1.0), ValidationError);
}

TEST(Gradient, OneAndTwoD) {
    auto g = make_grid(1, 32, 2 * pi);
    auto v = gradient(sample(g, [](auto x) { return std::sin(x[0]); }));
    EXPECT_LT(max_diff(v[0], sample(g, [](auto x) { return std::cos(x[0]); })), 1e-12);
    auto c = gradient(ScalarField(g, 3.5));
    EXPECT_LT(c[0].max_abs(), 1e-14);

    auto g2 = make_grid(2, 32, 2 * pi);
    auto v2 = gradient(sample(g2, [](auto x) { return std::sin(x[0]) * std::cos(x[1]); }));
    EXPECT_LT(max_diff(v2[0], sample(g2, [](auto x) { return std::cos(x[0]) * std::cos(x[1]); })), 1e-12);
    EXPECT_LT(max_diff(v2[1], sample(g2, [](auto x) { return -std::sin(x[0]) * std::sin(x[1]); })), 1e-12);
}

TEST(Divergence, Examples) {
    auto g = make_grid(2, 32, 2 * pi);
    VectorField v({sample(g, [](auto x) { return std::sin(x[0]); }), sample(g, [](auto x) { return std::sin(x[1]); })});
    auto d = divergence(v);
    EXPECT_LT(max_diff(d, sample(g, [](auto x) { return std::cos(x[0]) + std::cos(x[1]); })), 1e-12);
    EXPECT_LT(std::abs(d.mean()), 1e-13);
    auto f = random_trig(g, 10, 3);
    EXPECT_LT(max_diff(divergence(gradient(f)), laplacian(f)), 1e-12);
    VectorField cst({ScalarField(g, 1.0), ScalarField(g, -2.0)});
    EXPECT_LT(divergence(cst).max_abs(), 1e-14);
}

TEST(Laplacian, Examples) {
    auto g = make_grid(1, 16, 2 * pi);
    EXPECT_LT(max_diff(laplacian(sample(g, [](auto x) { return std::sin(x[0]); })),
                       sample(g, [](auto x) { return -std::sin(x[0]); })),
              1e-12);
    Spectrum s(g);
    s[2] = Complex(0.3, -0.1);
    auto l = laplacian(s);
    EXPECT_NEAR(std::abs(l[2] - (-4.0) * s[2]), 0.0, 1e-14);
    auto g3 = make_grid(3, 16, 2 * pi);
    auto f = random_trig(g3, 4, 11);
    auto a = laplacian(gradient(f));
    auto b = gradient(laplacian(f));
    for (int i = 0; i < 3; ++i) EXPECT_LT(max_diff(a[i], b[i]), 1e-12);
}

TEST(Curl, Examples) {
    auto g = make_grid(2, 32, 2 * pi);
    auto z = curl(gradient(sample(g, [](auto x) { return std::sin(x[0]) * std::sin(x[1]); })));
    ASSERT_EQ(z.size(), 1u);
    EXPECT_LT(z[0].max_abs(), 1e-12);
    VectorField rot({sample(g, [](auto x) { return -std::sin(x[1]); }), sample(g, [](auto x) { return std::sin(x[0]); })});
    EXPECT_LT(max_diff(curl(rot)[0], sample(g, [](auto x) { return std::cos(x[0]) + std::cos(x[1]); })), 1e-12);
    auto g3 = make_grid(3, 16, 2 * pi);
    auto c3 = curl(gradient(sample(g3, [](auto x) { return std::sin(x[0]) * std::cos(x[2]); })));
    ASSERT_EQ(c3.size(), 3u);
    for (auto& c : c3) EXPECT_LT(c.max_abs(), 1e-12);
    EXPECT_THROW(curl(VectorField(make_grid(1, 16, 1.0))), ValidationError);
}

TEST(Curl, RandomIdentities3D) {
    auto g = make_grid(3, 16, 2 * pi);
    auto c = curl(gradient(random_trig(g, 5, 1)));
    for (auto& x : c) EXPECT_LT(x.max_abs(), 1e-12);
    VectorField v({random_trig(g, 5, 2), random_trig(g, 5, 3), random_trig(g, 5, 4)});
    EXPECT_LT(divergence(VectorField(curl(v))).max_abs(), 1e-12);
}

TEST(Dealias, Projection) {
    auto g = make_grid(1, 128, 2 * pi);
    Spectrum s(g);
    s[1] = 1.0;
    s[60] = 0.5;
    auto d = dealias(s);
    EXPECT_EQ(d[1], Complex(1.0));
    EXPECT_EQ(d[60], Complex(0.0));
    EXPECT_EQ(dealias(d).data, d.data);
    EXPECT_LE(norm_l2(d), norm_l2(s));
    auto g2 = make_grid(2, 64, 2 * pi);
    auto f = forward(random_trig(g2, 30, 5));
    auto df = dealias(f);
    EXPECT_EQ(dealias(df).data, df.data);
    EXPECT_LE(norm_l2(df), norm_l2(f) * (1 + 1e-15));
}

TEST(Norms, Examples) {
    auto g = make_grid(1, 32, 2 * pi);
    auto s = sample(g, [](auto x) { return std::sin(x[0]); });
    EXPECT_NEAR(norm_l2(s), std::sqrt(pi), 1e-13);
    auto g2 = make_grid(2, 16, 3.0);
    EXPECT_NEAR(norm_l2(ScalarField(g2, -2.0)), 2.0 * 3.0, 1e-13);
    // fine-grid trapezoid quadrature of sin^2 + cos^2 over one period
    const int n = 4096;
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = 2 * pi * i / n;
        q += (std::sin(x) * std::sin(x) + std::cos(x) * std::cos(x)) * (2 * pi / n);
    }
    EXPECT_NEAR(norm_hk(s, 1) * norm_hk(s, 1), q, 1e-11);
    EXPECT_NEAR(norm_hk(s, 1) * norm_hk(s, 1), 2 * pi, 1e-12);
}

TEST(Norms, MultiIndexH2) {
    // f = cos(x + 2y): |alpha|<=2 weights 1 + (1 + 4) + (1 + 4 + 16) = 27
    auto g = make_grid(2, 32, 2 * pi);
    auto f = sample(g, [](auto x) { return std::cos(x[0] + 2 * x[1]); });
    double l2 = norm_l2(f);
    EXPECT_NEAR(norm_hk(f, 2) * norm_hk(f, 2), 27 * l2 * l2, 1e-10);
    EXPECT_THROW(norm_hk(f, 4), ValidationError);
}

TEST(Norms, Parseval) {
    for (int d = 1; d <= 3; ++d) {
        auto g = make_grid(d, d == 3 ? 16 : 64, 5.0);
        std::mt19937 rng(d);
        std::normal_distribution<double> nd;
        ScalarField f(g);
        for (auto& x : f.values) x = nd(rng);
        EXPECT_NEAR(norm_l2(f), norm_l2_quadrature(f), 1e-12 * norm_l2(f));
    }
}

TEST(Norms, Lp) {
    auto g = make_grid(1, 64, 2 * pi);
    auto s = sample(g, [](auto x) { return std::sin(x[0]); });
    // int sin^4 = 3 pi / 4, exact for the trapezoid rule at this resolution
    EXPECT_NEAR(norm_lp(s, 4), std::pow(3 * pi / 4, 0.25), 1e-13);
    EXPECT_NEAR(norm_lp(s, kInf), 1.0, 1e-12);
    EXPECT_NEAR(norm_lp(ScalarField(g, 2.0), 6), 2.0 * std::pow(2 * pi, 1.0 / 6), 1e-13);
}

TEST(Norms, UnderResolutionWarns) {
    auto g = make_grid(1, 32, 2 * pi);
    auto f = sample(g, [](auto x) { return std::cos(14 * x[0]); });
    int count = 0;
    auto old = set_warning_sink([&](const std::string&) { ++count; });
    norm_hk(f, 1);
    set_warning_sink(old);
    EXPECT_EQ(count, 1);
}

TEST(Potential, Roundtrip) {
    auto g = make_grid(1, 32, 2 * pi);
    auto phi = inverse_gradient_potential(gradient(sample(g, [](auto x) { return std::sin(x[0]); })));
    EXPECT_LT(max_diff(phi, sample(g, [](auto x) { return std::sin(x[0]); })), 1e-12);
    EXPECT_LT(inverse_gradient_potential(VectorField(g)).max_abs(), 1e-15);

    auto g3 = make_grid(3, 16, 7.0);
    auto v = gradient(random_trig(g3, 5, 9));
    auto back = gradient(inverse_gradient_potential(v));
    EXPECT_LT(norm_l2(back - v), 1e-10 * norm_l2(v));
}

TEST(Potential, Errors) {
    auto g = make_grid(2, 32, 2 * pi);
    VectorField v({sample(g, [](auto x) { return -1e-3 / std::sqrt(2 * pi * pi) * std::sin(x[1]); }), ScalarField(g)});
    EXPECT_GT(curl_norm(v), 5e-4);
    EXPECT_THROW(inverse_gradient_potential(v), CurlNotZero);
    VectorField m({ScalarField(g, 1e-6), ScalarField(g)});
    EXPECT_THROW(inverse_gradient_potential(m), NonzeroMean);
}
