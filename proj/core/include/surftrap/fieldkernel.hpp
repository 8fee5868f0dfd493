#pragma once

// Analytic electrostatics of rectangular patches in a gapless conducting
// plane.  A patch held at 1 V with the rest of the plane grounded produces at
// height x > 0 a potential equal to its subtended solid angle / 2pi; field
// and field Jacobian are closed-form corner sums.  Layout-level fields
// superpose patches with complex drive phasors, treating each aperture as a
// subtracted patch scaled by its coating transfer factor.

#include <complex>

#include "surftrap/geometry.hpp"

namespace surftrap {

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Row-major 3x3, indices 0,1,2 = x,y,z.
struct Mat3 {
  double m[3][3] = {};
  double* operator[](int i) { return m[i]; }
  const double* operator[](int i) const { return m[i]; }
};

using phasor = std::complex<double>;

// One complex amplitude per Cartesian component; the physical field is
// Re(E * exp(i * omega * t)).
struct PhasorField3 {
  phasor x{}, y{}, z{};
};

struct PhasorMat3 {
  phasor m[3][3] = {};
  phasor* operator[](int i) { return m[i]; }
  const phasor* operator[](int i) const { return m[i]; }
};

// |Ex|^2 + |Ey|^2 + |Ez|^2, the quantity the pseudopotential sees.
double amplitude_sq(const PhasorField3& e);
// sqrt of the radial part only, |Ex|^2 + |Ey|^2.
double radial_amplitude(const PhasorField3& e);

// Potential at p of the patch at 1 V, grounded plane elsewhere.
// Dimensionless (volts per volt).  Throws std::invalid_argument if p.x <= 0.
double patch_potential(const Rect& patch, const Point3& p);

// Gradient of -patch_potential: the E field per volt, 1/m.
Vec3 patch_field(const Rect& patch, const Point3& p);

// Spatial derivatives of patch_field: J[i][j] = d E_i / d x_j.  Symmetric and
// traceless (curl- and divergence-free above the plane).
Mat3 patch_field_jacobian(const Rect& patch, const Point3& p);

// Complex superposition over every driven electrode of the requested kind.
// Each electrode contributes V e^{i phi} times its region's field minus, for
// every aperture, (1 - H) V e^{i phi} times the hole patch's field, where H
// is the aperture's coating transfer at drive.rf_omega (H = 0 uncoated).
// Throws layout_error for drive ids with no matching electrode.
phasor layout_potential(const TrapLayout& layout, const Drive& drive,
                        const Point3& p, DriveKind which = DriveKind::rf);
PhasorField3 layout_field(const TrapLayout& layout, const Drive& drive,
                          const Point3& p, DriveKind which = DriveKind::rf);
PhasorMat3 layout_field_jacobian(const TrapLayout& layout, const Drive& drive,
                                 const Point3& p, DriveKind which = DriveKind::rf);

}  // namespace surftrap
