#include "bll/norms.hpp"

#include <cmath>
#include <sstream>

#include "bll/errors.hpp"
#include "bll/fft.hpp"
#include "bll/spectral_ops.hpp"

namespace bll {

namespace {

constexpr double kTailWarn = 0.01;

// sum over multi-indices |alpha| <= k of prod_i k_i^(2 alpha_i). Odd powers
// use the derivative wavenumbers so that seminorms agree with gradient().
double hk_weight(const Mode& m, int dim, int k) {
    auto factor = [&](int axis, int a) {
        double kk = (a % 2 == 1) ? m.kd[axis] : m.k[axis];
        return std::pow(kk, 2 * a);
    };
    double w = 0.0;
    for (int a0 = 0; a0 <= k; ++a0) {
        if (dim == 1) {
            w += factor(0, a0);
            continue;
        }
        for (int a1 = 0; a0 + a1 <= k; ++a1) {
            if (dim == 2) {
                w += factor(0, a0) * factor(1, a1);
                continue;
            }
            for (int a2 = 0; a0 + a1 + a2 <= k; ++a2) w += factor(0, a0) * factor(1, a1) * factor(2, a2);
        }
    }
    return w;
}

}  // namespace

double norm_l2(const Spectrum& s) {
    double sum = 0.0;
    for_each_mode(*s.grid, [&](std::size_t i, const Mode& m) { sum += m.weight * std::norm(s.data[i]); });
    return std::sqrt(sum * s.grid->volume());
}

double norm_l2(const ScalarField& f) { return norm_l2(forward(f)); }

double norm_l2(const VectorField& v) {
    double sum = 0.0;
    for (const auto& c : v.components) {
        double n = norm_l2(c);
        sum += n * n;
    }
    return std::sqrt(sum);
}

double norm_l2_quadrature(const ScalarField& f) {
    double sum = 0.0;
    for (double x : f.values) sum += x * x;
    return std::sqrt(sum * f.grid->cell_volume());
}

double tail_energy_fraction(const Spectrum& s) {
    const Grid& g = *s.grid;
    double total = 0.0, tail = 0.0;
    for_each_mode(g, [&](std::size_t i, const Mode& m) {
        double e = m.weight * std::norm(s.data[i]);
        total += e;
        if (is_dealiased_mode(g, m)) tail += e;
    });
    return total > 0.0 ? tail / total : 0.0;
}

double norm_hk(const ScalarField& f, int k) {
    if (k < 1 || k > 3) throw ValidationError("norm_hk supports k = 1, 2, 3");
    Spectrum s = forward(f);
    double tail = tail_energy_fraction(s);
    if (tail > kTailWarn) {
        std::ostringstream msg;
        msg << "H^" << k << " norm of an under-resolved field (tail energy fraction " << tail << ")";
        warn(msg.str());
    }
    const int dim = f.grid->dim();
    double sum = 0.0;
    for_each_mode(*s.grid, [&](std::size_t i, const Mode& m) {
        sum += m.weight * std::norm(s.data[i]) * hk_weight(m, dim, k);
    });
    return std::sqrt(sum * s.grid->volume());
}

double norm_hk(const VectorField& v, int k) {
    double sum = 0.0;
    for (const auto& c : v.components) {
        double n = norm_hk(c, k);
        sum += n * n;
    }
    return std::sqrt(sum);
}

double norm_lp(const ScalarField& f, double p) {
    if (std::isinf(p)) return f.max_abs();
    if (!(p >= 1.0)) throw ValidationError("norm_lp needs p >= 1");
    double sum = 0.0;
    for (double x : f.values) sum += std::pow(std::abs(x), p);
    return std::pow(sum * f.grid->cell_volume(), 1.0 / p);
}

double norm_lp(const VectorField& v, double p) { return norm_lp(v.magnitude(), p); }

double integrate(const ScalarField& f) {
    double sum = 0.0;
    for (double x : f.values) sum += x;
    return sum * f.grid->cell_volume();
}

}  // namespace bll
