#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "bll/grid.hpp"

namespace bll {

using Complex = std::complex<double>;

/// Real values at the grid nodes in storage order.
struct ScalarField {
    GridPtr grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(GridPtr g, double fill = 0.0);
    ScalarField(GridPtr g, std::vector<double> vals);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    double min() const;
    double max_abs() const;
    double mean() const;
    bool all_finite() const;
};

struct VectorField {
    GridPtr grid;
    std::vector<ScalarField> components;

    VectorField() = default;
    explicit VectorField(GridPtr g);  // dim zero components
    explicit VectorField(std::vector<ScalarField> comps);

    int dim() const { return static_cast<int>(components.size()); }
    ScalarField& operator[](int i) { return components[i]; }
    const ScalarField& operator[](int i) const { return components[i]; }

    /// Pointwise Euclidean magnitude.
    ScalarField magnitude() const;
    bool all_finite() const;
};

/// Normalised half-spectrum: coefficient = FFT / N^dim, so entry 0 is the mean.
struct Spectrum {
    GridPtr grid;
    std::vector<Complex> data;

    Spectrum() = default;
    explicit Spectrum(GridPtr g);

    std::size_t size() const { return data.size(); }
    Complex& operator[](std::size_t i) { return data[i]; }
    const Complex& operator[](std::size_t i) const { return data[i]; }
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField operator*(const ScalarField& a, const ScalarField& b);  // pointwise
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);

/// Samples fn(x) with x the node coordinates.
template <class Fn>
ScalarField sample(GridPtr g, Fn&& fn) {
    ScalarField f(g);
    for_each_node(*g, [&](std::size_t i, const std::array<double, 3>& x) { f.values[i] = fn(x); });
    return f;
}

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what);

}  // namespace bll
