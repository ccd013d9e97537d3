#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace bll {

/// Uniform periodic grid on the torus [0, L)^dim with the same number of
/// nodes on every axis. Arrays are stored row-major with axes ordered x, y, z
/// (x slowest). The spectral layout follows the real-to-complex convention:
/// the last axis keeps modes 0..N/2 only.
class Grid {
  public:
    Grid(int dim, int points, double length);

    int dim() const { return dim_; }
    int points() const { return points_; }
    double length() const { return length_; }
    double spacing() const { return spacing_; }

    std::size_t size() const { return size_; }
    std::size_t spectral_size() const { return spectral_size_; }
    /// Number of complex modes along the last (halved) axis.
    int half_points() const { return points_ / 2 + 1; }

    double volume() const;
    double cell_volume() const;

    /// Integer mode for full-axis index j (j < N/2 -> j, else j - N).
    int mode(int j) const { return j < points_ / 2 ? j : j - points_; }
    /// Wavenumber 2*pi*m/L for full-axis index j.
    double wavenumber(int j) const { return wavenumbers_[j]; }
    /// Wavenumber used for first derivatives; the Nyquist mode is zeroed.
    double derivative_wavenumber(int j) const { return j == points_ / 2 ? 0.0 : wavenumbers_[j]; }

    double node(int j) const { return j * spacing_; }

    /// Strides of the physical array per axis.
    std::size_t stride(int axis) const;

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

  private:
    int dim_;
    int points_;
    double length_;
    double spacing_;
    std::size_t size_;
    std::size_t spectral_size_;
    std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validated constructor: dim in {1,2,3}, points a power of two >= 8, length > 0.
GridPtr make_grid(int dim, int points, double length);

/// One spectral coefficient's location: integer modes and wavenumbers per
/// axis plus the Parseval weight (2 where the conjugate partner is implicit).
struct Mode {
    std::array<int, 3> m{0, 0, 0};
    std::array<double, 3> k{0.0, 0.0, 0.0};   // exact wavenumbers
    std::array<double, 3> kd{0.0, 0.0, 0.0};  // derivative wavenumbers (Nyquist zeroed)
    double k2 = 0.0;                          // |k|^2 with exact wavenumbers
    double weight = 1.0;
};

/// Visits every spectral coefficient in storage order: fn(index, mode).
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    const int n = g.points();
    const int nh = g.half_points();
    const int d = g.dim();
    Mode md;
    auto last_axis = [&](std::size_t base, int axis) {
        for (int j = 0; j < nh; ++j) {
            md.m[axis] = j;
            md.k[axis] = g.wavenumber(j);
            md.kd[axis] = j == n / 2 ? 0.0 : g.wavenumber(j);
            md.weight = (j == 0 || j == n / 2) ? 1.0 : 2.0;
            md.k2 = md.k[0] * md.k[0] + md.k[1] * md.k[1] + md.k[2] * md.k[2];
            fn(base + static_cast<std::size_t>(j), static_cast<const Mode&>(md));
        }
    };
    auto full_axis = [&](int axis, int j) {
        md.m[axis] = g.mode(j);
        md.k[axis] = g.wavenumber(j);
        md.kd[axis] = g.derivative_wavenumber(j);
    };
    if (d == 1) {
        last_axis(0, 0);
    } else if (d == 2) {
        for (int i = 0; i < n; ++i) {
            full_axis(0, i);
            last_axis(static_cast<std::size_t>(i) * nh, 1);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            full_axis(0, i);
            for (int j = 0; j < n; ++j) {
                full_axis(1, j);
                last_axis((static_cast<std::size_t>(i) * n + j) * nh, 2);
            }
        }
    }
}

/// Visits every node in storage order: fn(index, x) with x the coordinates.
template <class Fn>
void for_each_node(const Grid& g, Fn&& fn) {
    const int n = g.points();
    std::array<double, 3> x{0.0, 0.0, 0.0};
    std::size_t idx = 0;
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i) {
            x[0] = g.node(i);
            fn(idx++, static_cast<const std::array<double, 3>&>(x));
        }
    } else if (g.dim() == 2) {
        for (int i = 0; i < n; ++i) {
            x[0] = g.node(i);
            for (int j = 0; j < n; ++j) {
                x[1] = g.node(j);
                fn(idx++, static_cast<const std::array<double, 3>&>(x));
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            x[0] = g.node(i);
            for (int j = 0; j < n; ++j) {
                x[1] = g.node(j);
                for (int k = 0; k < n; ++k) {
                    x[2] = g.node(k);
                    fn(idx++, static_cast<const std::array<double, 3>&>(x));
                }
            }
        }
    }
}

}  // namespace bll
