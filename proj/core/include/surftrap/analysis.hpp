#pragma once

// Field-level analyses: radial null location, aperture-induced null
// displacement, axial field scans, and peak metrics of scan profiles.

#include <limits>
#include <optional>
#include <vector>

#include "surftrap/fieldkernel.hpp"
#include "surftrap/geometry.hpp"

namespace surftrap {

struct NullResult {
  double x = 0.0;          // m
  double y = 0.0;          // m
  double residual = 0.0;   // sqrt(|Ex|^2 + |Ey|^2) at the null, V/m
  int iterations = 0;
  double final_step = 0.0; // last Newton step length, m
};

// Minimizes f = |Ex|^2 + |Ey|^2 in the (x, y) plane at fixed z by damped
// Newton iteration; the gradient uses the analytic field Jacobian, the
// Hessian central differences of f (0.1 um step).  Converges when the step
// drops below 1e-12 m or the gradient norm stops improving (relative change
// < 1e-14).  Throws numeric_error after 200 iterations without convergence
// or when the converged point is not a minimum (guess left the trapping
// region).
NullResult find_radial_null(const TrapLayout& layout, const Drive& drive,
                            double z = 0.0,
                            std::optional<Point3> guess = std::nullopt);

struct Displacement {
  double dx = 0.0;  // m, modified null minus reference null
  double dy = 0.0;
  NullResult modified;
  NullResult reference;
  // |E| of the modified layout at the reference null: the residual RF field
  // an undisplaced ion would sit in, V/m.
  double residual_at_reference = 0.0;
};

// Null displacement of `layout` relative to the unmodified reference layout
// under the same drive, at fixed z.
Displacement displacement(const TrapLayout& layout, const Drive& drive,
                          double z = 0.0);

struct AxialScan {
  double height = 0.0;            // x of the scan line, m
  std::vector<double> z;          // m
  std::vector<PhasorField3> field;
};

// RF field phasors along the line (height, 0, z), z in [z_min, z_max] with
// `samples` uniform points.  If height is NaN the scan runs at the layout's
// own radial null height (found at z = 0).
AxialScan axial_scan(const TrapLayout& layout, const Drive& drive,
                     double z_min = -1e-3, double z_max = 1e-3,
                     int samples = 2001,
                     double height = std::numeric_limits<double>::quiet_NaN());

enum class FieldComponent { ex, ey, ez };

struct PeakMetrics {
  FieldComponent component = FieldComponent::ex;
  double amplitude_z0 = 0.0;        // |E| at z = 0, V/m
  double peak_amplitude = 0.0;      // interior |E| maximum, V/m
  double peak_z = 0.0;              // m
  double fwhm = 0.0;                // m
  double fwhm_gradient = 0.0;       // mean |d|E|/dz| at the half-max points, V/m^2
  double dispersive_gradient = 0.0; // d/dz of the signed profile at z = 0, V/m^2
};

// Peak shape of one component's modulus profile: 3-point parabolic peak
// refinement, half-max crossings by bisection on a local quadratic
// interpolant, gradients by central differences on the interpolant.  The
// dispersive gradient projects the phasor onto the phase of the largest
// sample so odd (sign-changing) profiles keep their sign.  Throws
// numeric_error when the profile has no interior peak, a half-max crossing
// is not bracketed, or fewer than 8 samples resolve the FWHM.
PeakMetrics peak_metrics(const AxialScan& scan, FieldComponent component);

phasor phasor_component(const PhasorField3& e, FieldComponent c);
const char* to_string(FieldComponent c);

}  // namespace surftrap
