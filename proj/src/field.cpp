#include "bll/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bll/errors.hpp"

namespace bll {

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
    if (!a || !b) throw ValidationError(std::string(what) + ": field has no grid");
    if (a != b && *a != *b) throw ValidationError(std::string(what) + ": fields live on different grids");
}

ScalarField::ScalarField(GridPtr g, double fill) : grid(std::move(g)), values(grid->size(), fill) {}

ScalarField::ScalarField(GridPtr g, std::vector<double> vals) : grid(std::move(g)), values(std::move(vals)) {
    if (values.size() != grid->size()) throw ValidationError("scalar field size does not match grid");
}

double ScalarField::min() const {
    double m = std::numeric_limits<double>::infinity();
    for (double x : values) m = std::min(m, x);
    return m;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double x : values) m = std::max(m, std::abs(x));
    return m;
}

double ScalarField::mean() const {
    double s = 0.0;
    for (double x : values) s += x;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

bool ScalarField::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

VectorField::VectorField(GridPtr g) : grid(g) {
    for (int i = 0; i < g->dim(); ++i) components.emplace_back(g);
}

VectorField::VectorField(std::vector<ScalarField> comps) : components(std::move(comps)) {
    if (components.empty()) throw ValidationError("vector field needs at least one component");
    grid = components.front().grid;
    for (const auto& c : components) require_same_grid(grid, c.grid, "vector field");
    if (static_cast<int>(components.size()) != grid->dim())
        throw ValidationError("vector field must have one component per dimension");
}

ScalarField VectorField::magnitude() const {
    ScalarField m(grid);
    for (const auto& c : components)
        for (std::size_t i = 0; i < m.size(); ++i) m.values[i] += c.values[i] * c.values[i];
    for (double& x : m.values) x = std::sqrt(x);
    return m;
}

bool VectorField::all_finite() const {
    return std::all_of(components.begin(), components.end(), [](const ScalarField& c) { return c.all_finite(); });
}

Spectrum::Spectrum(GridPtr g) : grid(std::move(g)), data(grid->spectral_size(), Complex(0.0, 0.0)) {}

namespace {

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op, const char* what) {
    require_same_grid(a.grid, b.grid, what);
    ScalarField r(a.grid);
    for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = op(a.values[i], b.values[i]);
    return r;
}

template <class Op>
VectorField zipv(const VectorField& a, const VectorField& b, Op op, const char* what) {
    require_same_grid(a.grid, b.grid, what);
    std::vector<ScalarField> c;
    for (int i = 0; i < a.dim(); ++i) c.push_back(zip(a[i], b[i], op, what));
    return VectorField(std::move(c));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x + y; }, "add");
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x - y; }, "subtract");
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x * y; }, "multiply");
}
ScalarField operator*(double s, const ScalarField& a) {
    ScalarField r = a;
    for (double& x : r.values) x *= s;
    return r;
}
VectorField operator+(const VectorField& a, const VectorField& b) {
    return zipv(a, b, [](double x, double y) { return x + y; }, "add");
}
VectorField operator-(const VectorField& a, const VectorField& b) {
    return zipv(a, b, [](double x, double y) { return x - y; }, "subtract");
}
VectorField operator*(double s, const VectorField& a) {
    VectorField r = a;
    for (auto& c : r.components)
        for (double& x : c.values) x *= s;
    return r;
}

}  // namespace bll
