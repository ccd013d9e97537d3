#include "bll/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace bll {

namespace {

struct Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex plan_mutex;

const Plans& plans_for(const Grid& g) {
    static std::map<std::pair<int, int>, Plans> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(g.dim(), g.points());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    int n[3] = {g.points(), g.points(), g.points()};
    std::vector<double> real(g.size());
    std::vector<Complex> spec(g.spectral_size());
    auto* cptr = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    p.r2c = fftw_plan_dft_r2c(g.dim(), n, real.data(), cptr, flags);
    p.c2r = fftw_plan_dft_c2r(g.dim(), n, cptr, real.data(), flags);
    return cache.emplace(key, p).first->second;
}

}  // namespace

void forward_into(const Grid& g, const double* in, Complex* out) {
    const Plans& p = plans_for(g);
    fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < g.spectral_size(); ++i) out[i] *= scale;
}

void inverse_into(const Grid& g, const Complex* in, double* out) {
    const Plans& p = plans_for(g);
    // c2r overwrites its input
    std::vector<Complex> work(in, in + g.spectral_size());
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(work.data()), out);
}

Spectrum forward(const ScalarField& f) {
    Spectrum s(f.grid);
    forward_into(*f.grid, f.values.data(), s.data.data());
    return s;
}

ScalarField inverse(const Spectrum& s) {
    ScalarField f(s.grid);
    inverse_into(*s.grid, s.data.data(), f.values.data());
    return f;
}

}  // namespace bll
