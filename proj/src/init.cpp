#include "bll/init.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "bll/errors.hpp"
#include "bll/fft.hpp"
#include "bll/spectral_ops.hpp"

namespace bll {

namespace {

using std::numbers::pi;

// Bump (a/f)[1 - cos(r/f)] on [2 f pi, 4 f pi] and its radial antiderivative
// vanishing at the inner edge.
struct RadialBump {
    double amp;    // peak height / 2
    double scale;  // f

    double value(double r) const {
        if (r < 2 * pi * scale || r > 4 * pi * scale) return 0.0;
        return amp * (1.0 - std::cos(r / scale));
    }
    double potential(double r) const {
        const double r0 = 2 * pi * scale;
        if (r <= r0) return 0.0;
        const double rr = std::min(r, 4 * pi * scale);
        return amp * ((rr - r0) - scale * std::sin(rr / scale));
    }
};

void require_fits(const Grid& g, double scale, const char* what) {
    const double need = 8.0 * pi * scale + 4.0 * g.spacing();
    if (!(g.length() > need)) {
        std::ostringstream msg;
        msg << what << ": support of diameter " << 8.0 * pi * scale << " does not fit a torus of length " << g.length()
            << " (need > " << need << ")";
        throw DomainTooSmall(msg.str());
    }
}

State radial_state(const RadialBump& b, GridPtr grid) {
    ScalarField p = sample(grid, [&](const std::array<double, 3>& x) { return b.value(centred_radius(*grid, x)); });
    ScalarField phi = sample(grid, [&](const std::array<double, 3>& x) { return b.potential(centred_radius(*grid, x)); });
    return State(std::move(p), gradient(phi), 0.0);
}

// Uniform double in [-1, 1) built from the top 53 bits, identical on every platform.
double uniform_pm1(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

ScalarField random_band_limited(GridPtr grid, std::mt19937_64& rng) {
    const Grid& g = *grid;
    const int band = g.points() / 8;
    Spectrum s(grid);
    for_each_mode(g, [&](std::size_t i, const Mode& m) {
        double re = uniform_pm1(rng), im = uniform_pm1(rng);
        bool inside = true;
        double m2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            if (std::abs(m.m[a]) > band) inside = false;
            m2 += double(m.m[a]) * m.m[a];
        }
        if (!inside || m2 == 0.0) return;
        s.data[i] = Complex(re, im) / ((1.0 + m2) * (1.0 + m2));
    });
    return inverse(s);
}

}  // namespace

double appendix3d_profile(int n, double r) { return RadialBump{std::pow(double(n), -1.25), double(n)}.value(r); }

double appendix2d_profile(int n, double f, double r) { return RadialBump{n / f, f}.value(r); }

double appendix2d_f(int n, double s) {
    if (n < 1) throw ValidationError("appendix family index must be >= 1");
    const double e = s * std::pow(double(n), 5);
    if (e > std::log(std::numeric_limits<double>::max())) {
        std::ostringstream msg;
        msg << "f(" << n << ") = exp(" << e << ") overflows";
        throw OverflowGuard(msg.str());
    }
    const double f = std::exp(e);
    if (8.0 * pi * f > kMaxDomainLength) {
        std::ostringstream msg;
        msg << "f(" << n << ") = " << f << " needs a torus longer than " << kMaxDomainLength;
        throw OverflowGuard(msg.str());
    }
    return f;
}

double centred_radius(const Grid& g, const std::array<double, 3>& x) {
    const double L = g.length();
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        double d = x[a] - 0.5 * L;
        d -= L * std::round(d / L);
        r2 += d * d;
    }
    return std::sqrt(r2);
}

State init_appendix_3d(int n, double B, GridPtr grid) {
    if (grid->dim() != 3) throw ValidationError("init_appendix_3d needs a 3D grid");
    if (n < 1) throw ValidationError("appendix family index must be >= 1");
    if (!(B > 0.0)) throw ValidationError("B must be positive");
    require_fits(*grid, n, "init_appendix_3d");
    return radial_state(RadialBump{std::pow(double(n), -1.25), double(n)}, grid);
}

State init_appendix_2d(int n, double A, double f_exponent_scale, GridPtr grid) {
    if (grid->dim() != 2) throw ValidationError("init_appendix_2d needs a 2D grid");
    if (!(A > 0.0)) throw ValidationError("A must be positive");
    const double f = appendix2d_f(n, f_exponent_scale);
    require_fits(*grid, f, "init_appendix_2d");
    return radial_state(RadialBump{n / f, f}, grid);
}

State init_manufactured(GridPtr grid, std::uint64_t seed, double amplitude, double pbar) {
    if (!(amplitude >= 0.0)) throw ValidationError("amplitude must be >= 0");
    if (!(pbar > 0.0)) throw ValidationError("pbar must be positive");
    if (amplitude == 0.0) return State::zero(grid);
    std::mt19937_64 rng(seed);
    ScalarField p = random_band_limited(grid, rng);
    ScalarField phi = random_band_limited(grid, rng);
    VectorField v = gradient(phi);
    const double pm = p.max_abs();
    const double vm = v.magnitude().max_abs();
    if (pm > 0.0) p = (amplitude / pm) * p;
    if (vm > 0.0) v = (amplitude / vm) * v;
    if (!(p.min() + pbar > 0.0)) {
        std::ostringstream msg;
        msg << "amplitude " << amplitude << " gives min(p + pbar) = " << p.min() + pbar;
        throw PositivityViolation(msg.str());
    }
    return State(std::move(p), std::move(v), 0.0);
}

}  // namespace bll
