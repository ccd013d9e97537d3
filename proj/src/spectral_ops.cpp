#include "bll/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bll/errors.hpp"
#include "bll/fft.hpp"
#include "bll/norms.hpp"

namespace bll {

namespace {

constexpr double kCurlTolerance = 1e-8;
constexpr double kMeanTolerance = 1e-10;

}  // namespace

Spectrum derivative(const Spectrum& f, int axis) {
    Spectrum out(f.grid);
    const Complex I(0.0, 1.0);
    for_each_mode(*f.grid, [&](std::size_t i, const Mode& m) { out.data[i] = I * m.kd[axis] * f.data[i]; });
    return out;
}

Spectrum laplacian(const Spectrum& f) {
    Spectrum out(f.grid);
    for_each_mode(*f.grid, [&](std::size_t i, const Mode& m) { out.data[i] = -m.k2 * f.data[i]; });
    return out;
}

Spectrum divergence(const std::vector<Spectrum>& v) {
    if (v.empty()) throw ValidationError("divergence of an empty vector field");
    Spectrum out(v.front().grid);
    const Complex I(0.0, 1.0);
    for_each_mode(*out.grid, [&](std::size_t i, const Mode& m) {
        Complex acc(0.0, 0.0);
        for (std::size_t a = 0; a < v.size(); ++a) acc += I * m.kd[a] * v[a].data[i];
        out.data[i] = acc;
    });
    return out;
}

bool is_dealiased_mode(const Grid& g, const Mode& m) {
    const int cut = g.points() / 3;
    for (int a = 0; a < g.dim(); ++a)
        if (std::abs(m.m[a]) > cut) return true;
    return false;
}

void dealias_in_place(Spectrum& f) {
    const Grid& g = *f.grid;
    for_each_mode(g, [&](std::size_t i, const Mode& m) {
        if (is_dealiased_mode(g, m)) f.data[i] = 0.0;
    });
}

Spectrum dealias(const Spectrum& f) {
    Spectrum out = f;
    dealias_in_place(out);
    return out;
}

VectorField gradient(const ScalarField& f) {
    Spectrum s = forward(f);
    std::vector<ScalarField> comps;
    for (int a = 0; a < f.grid->dim(); ++a) comps.push_back(inverse(derivative(s, a)));
    return VectorField(std::move(comps));
}

ScalarField divergence(const VectorField& v) {
    std::vector<Spectrum> s;
    for (const auto& c : v.components) s.push_back(forward(c));
    return inverse(divergence(s));
}

ScalarField laplacian(const ScalarField& f) { return inverse(laplacian(forward(f))); }

VectorField laplacian(const VectorField& v) {
    std::vector<ScalarField> comps;
    for (const auto& c : v.components) comps.push_back(laplacian(c));
    return VectorField(std::move(comps));
}

std::vector<ScalarField> curl(const VectorField& v) {
    const int d = v.grid->dim();
    if (d == 1) throw ValidationError("curl is undefined in one dimension");
    std::vector<Spectrum> s;
    for (const auto& c : v.components) s.push_back(forward(c));
    auto dd = [&](int comp, int axis) { return derivative(s[comp], axis); };
    auto sub = [](Spectrum a, const Spectrum& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a.data[i] -= b.data[i];
        return a;
    };
    std::vector<ScalarField> out;
    if (d == 2) {
        out.push_back(inverse(sub(dd(1, 0), dd(0, 1))));
    } else {
        out.push_back(inverse(sub(dd(2, 1), dd(1, 2))));
        out.push_back(inverse(sub(dd(0, 2), dd(2, 0))));
        out.push_back(inverse(sub(dd(1, 0), dd(0, 1))));
    }
    return out;
}

double curl_norm(const VectorField& v) {
    if (v.grid->dim() == 1) return 0.0;
    double sum = 0.0;
    for (const auto& c : curl(v)) {
        double n = norm_l2(c);
        sum += n * n;
    }
    return std::sqrt(sum);
}

ScalarField inverse_gradient_potential(const VectorField& v) {
    const Grid& g = *v.grid;
    std::vector<Spectrum> s;
    for (const auto& c : v.components) s.push_back(forward(c));
    for (int a = 0; a < g.dim(); ++a) {
        double mean = std::abs(s[a].data[0]);
        if (mean > kMeanTolerance) {
            std::ostringstream msg;
            msg << "component " << a << " of v has mean " << mean << " (tolerance " << kMeanTolerance << ")";
            throw NonzeroMean(msg.str());
        }
    }
    double cn = curl_norm(v);
    if (cn > kCurlTolerance) {
        std::ostringstream msg;
        msg << "curl norm " << cn << " exceeds " << kCurlTolerance;
        throw CurlNotZero(msg.str());
    }
    Spectrum phi(v.grid);
    const Complex I(0.0, 1.0);
    for_each_mode(g, [&](std::size_t i, const Mode& m) {
        double kk = 0.0;
        Complex acc(0.0, 0.0);
        for (int a = 0; a < g.dim(); ++a) {
            kk += m.kd[a] * m.kd[a];
            acc += m.kd[a] * s[a].data[i];
        }
        phi.data[i] = kk > 0.0 ? -I * acc / kk : Complex(0.0, 0.0);
    });
    return inverse(phi);
}

Spectrum resample_spectrum(const Spectrum& s, GridPtr target) {
    const Grid& src = *s.grid;
    if (target->dim() != src.dim()) throw ValidationError("resample_spectrum: dimension mismatch");
    if (target->points() == src.points()) {
        Spectrum out(target);
        out.data = s.data;
        return out;
    }
    const int nt = target->points();
    const int ht = nt / 2 + 1;
    Spectrum out(target);
    double total = 0.0, kept = 0.0;
    for_each_mode(src, [&](std::size_t i, const Mode& m) {
        double e = m.weight * std::norm(s.data[i]);
        total += e;
        bool fits = true;
        for (int a = 0; a < src.dim(); ++a)
            if (std::abs(m.m[a]) >= std::min(nt, src.points()) / 2) fits = false;
        if (!fits) return;
        std::size_t j = 0;
        for (int a = 0; a < src.dim(); ++a) {
            int idx = m.m[a];
            if (a < src.dim() - 1 && idx < 0) idx += nt;
            j = j * static_cast<std::size_t>(a == src.dim() - 1 ? ht : nt) + static_cast<std::size_t>(idx);
        }
        out.data[j] = s.data[i];
        kept += e;
    });
    if (total > 0.0 && (total - kept) > 0.01 * total) {
        std::ostringstream msg;
        msg << "resampling discards " << (total - kept) / total * 100.0 << "% of the spectral energy";
        warn(msg.str());
    }
    return out;
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) {
    return inverse(dealias(forward(a * b)));
}

}  // namespace bll
