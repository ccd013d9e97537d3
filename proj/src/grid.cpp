#include "bll/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bll/errors.hpp"

namespace bll {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t ipow(std::size_t base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

Grid::Grid(int dim, int points, double length)
    : dim_(dim), points_(points), length_(length), spacing_(length / points) {
    if (dim < 1 || dim > 3) throw ValidationError("grid dim must be 1, 2 or 3, got " + std::to_string(dim));
    if (points < 8 || !is_power_of_two(points))
        throw ValidationError("grid points must be a power of two >= 8, got " + std::to_string(points));
    if (!(length > 0.0) || !std::isfinite(length))
        throw ValidationError("grid length must be positive and finite, got " + std::to_string(length));
    size_ = ipow(static_cast<std::size_t>(points), dim);
    spectral_size_ = ipow(static_cast<std::size_t>(points), dim - 1) * static_cast<std::size_t>(points / 2 + 1);
    wavenumbers_.resize(points);
    const double base = 2.0 * std::numbers::pi / length;
    for (int j = 0; j < points; ++j) wavenumbers_[j] = base * mode(j);
}

double Grid::volume() const { return std::pow(length_, dim_); }

double Grid::cell_volume() const { return std::pow(spacing_, dim_); }

std::size_t Grid::stride(int axis) const { return ipow(static_cast<std::size_t>(points_), dim_ - 1 - axis); }

bool Grid::operator==(const Grid& other) const {
    return dim_ == other.dim_ && points_ == other.points_ && length_ == other.length_;
}

GridPtr make_grid(int dim, int points, double length) { return std::make_shared<const Grid>(dim, points, length); }

}  // namespace bll
