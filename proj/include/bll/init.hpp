#pragma once

#include <array>
#include <cstdint>
#include <numbers>

#include "bll/model.hpp"

namespace bll {

/// Radial profile of the three-dimensional appendix family:
/// n^{-5/4} [sin(r/n - pi/2) + 1] on [2 n pi, 4 n pi], zero elsewhere.
double appendix3d_profile(int n, double r);
/// Two-dimensional family: (n/f) [sin(r/f - pi/2) + 1] on [2 f pi, 4 f pi].
double appendix2d_profile(int n, double f, double r);

/// f(n) = exp(s n^5). Throws OverflowGuard when the value, or the torus it
/// would need, is not representable (the guard trips for n >= 3 with the
/// default s).
double appendix2d_f(int n, double f_exponent_scale);
constexpr double kDefaultFScale = 5.0 * std::numbers::ln2 / 32.0;  // f(2) = 32
constexpr double kMaxDomainLength = 1.0e6;

/// Distance from the torus centre under the minimal-image convention.
double centred_radius(const Grid& g, const std::array<double, 3>& x);

/// p is the bump (perturbation about pbar = B); v is the spectral gradient
/// of the sampled radial potential, hence curl-free to round-off.
State init_appendix_3d(int n, double B, GridPtr grid);
State init_appendix_2d(int n, double A, double f_exponent_scale, GridPtr grid);

/// Band-limited random data (modes |m_i| <= points/8) with spectral weights
/// (1 + |m|^2)^{-2}. Both max|p| and max|v| equal `amplitude`; v = grad phi.
/// Throws PositivityViolation when min(p + pbar) <= 0.
State init_manufactured(GridPtr grid, std::uint64_t seed, double amplitude, double pbar);

}  // namespace bll
