#pragma once

// Physical constants (CODATA 2018) and unit helpers.  SI throughout the
// library; file formats use the friendlier um / V / MHz and convert at the
// boundary.

namespace surftrap::constants {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double epsilon0 = 8.8541878128e-12;        // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double speed_of_light = 299792458.0;         // m/s (exact)

inline constexpr double um = 1e-6;   // meters per micrometer
inline constexpr double nm = 1e-9;   // meters per nanometer
inline constexpr double mm = 1e-3;   // meters per millimeter

}  // namespace surftrap::constants
