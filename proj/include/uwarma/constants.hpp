#pragma once

namespace uwarma {

/// Euler-Mascheroni constant to 20 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

inline constexpr double kPi = 3.14159265358979323846;

/// Floor applied to the ratio log(y)/log(mu) before it enters log space,
/// so pow computed as exp(lambda*log(ratio)) never sees log(0).
inline constexpr double kRatioFloor = 1e-300;

/// Conditional quantiles are kept inside [kMuEps, 1 - kMuEps] whenever a
/// link is inverted; hitting either bound counts as a saturation event.
inline constexpr double kMuEps = 1e-12;

}  // namespace uwarma
