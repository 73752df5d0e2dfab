#pragma once

// Size constants measured on the regression corpora and then frozen.  Each
// asserted bound has the shape of the asymptotic statement with this constant
// in front; the measured maxima are noted for reference.
namespace pl::bounds {

inline constexpr double kPsim = 1.0;     // |psim| <= K n^2 |τ| |Π|, measured max 0.67 (n = 1)
inline constexpr double kP0w = 2.0;      // |p0w| <= K n^2 |Π|, measured max 1.67 (n = 1), 0.55 for n >= 2
inline constexpr double kStone = 4.0;    // |refute_stone| <= c n m^3, measured max 3.02
inline constexpr double kIndXor = 8.0;   // |refute_ind_xor2| <= c n^2 for n >= 5, measured max 5.72
inline constexpr double kIndXorSlope = 2.2;

}  // namespace pl::bounds
