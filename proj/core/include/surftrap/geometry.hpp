#pragma once

// Planar trap geometry: axis-aligned electrode patches in the plane x = 0,
// with optional square apertures (through-holes) cut into them.  The ion side
// is x > 0; y runs across the electrode strips, z along the trap axis.
// Everything outside a named electrode is grounded plane, so inter-electrode
// gaps need no explicit representation.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surftrap/constants.hpp"
#include "surftrap/errors.hpp"

namespace surftrap {

// Axis-aligned rectangle in the electrode plane.  Units are meters.
struct Rect {
  double y_min = 0.0;
  double y_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;

  double width() const { return y_max - y_min; }    // extent across the trap
  double length() const { return z_max - z_min; }   // extent along the axis
  double area() const { return width() * length(); }
  double center_y() const { return 0.5 * (y_min + y_max); }
  double center_z() const { return 0.5 * (z_min + z_max); }

  bool valid() const { return y_min < y_max && z_min < z_max; }
  bool contains_point(double y, double z) const {
    return y >= y_min && y <= y_max && z >= z_min && z <= z_max;
  }
  bool contains(const Rect& r, double tol = 1e-12) const {
    return r.y_min >= y_min - tol && r.y_max <= y_max + tol &&
           r.z_min >= z_min - tol && r.z_max <= z_max + tol;
  }
  // Positive-area overlap; touching edges do not count.
  bool overlaps(const Rect& r) const {
    return y_min < r.y_max && r.y_min < y_max && z_min < r.z_max && r.z_min < z_max;
  }
  std::optional<Rect> intersection(const Rect& r) const {
    Rect out{std::max(y_min, r.y_min), std::min(y_max, r.y_max),
             std::max(z_min, r.z_min), std::min(z_max, r.z_max)};
    if (!out.valid()) return std::nullopt;
    return out;
  }
  Rect mirrored_y() const { return {-y_max, -y_min, z_min, z_max}; }
  Rect mirrored_z() const { return {y_min, y_max, -z_max, -z_min}; }

  static Rect centered(double cy, double cz, double wy, double wz) {
    return {cy - 0.5 * wy, cy + 0.5 * wy, cz - 0.5 * wz, cz + 0.5 * wz};
  }
};

// Transparent-conductive-oxide fill of an aperture.
struct TcoCoating {
  double sigma = 0.0;          // bulk conductivity, S/m
  double thickness = 50e-9;    // film thickness, m
};

// A hole cut through an electrode.  Normally a square of side `width`
// centered at (p_y, p_z); clipping against electrode boundaries (see
// add_aperture) can leave a general rectangle.
struct Aperture {
  Rect patch;
  std::optional<TcoCoating> coating;

  static Aperture square(double p_y, double p_z, double w,
                         std::optional<TcoCoating> c = std::nullopt) {
    return {Rect::centered(p_y, p_z, w, w), std::move(c)};
  }
  double center_y() const { return patch.center_y(); }
  double center_z() const { return patch.center_z(); }
  double width() const { return patch.width(); }
};

enum class ElectrodeKind { rf, center_dc, outer_dc };

struct Electrode {
  std::string id;
  ElectrodeKind kind = ElectrodeKind::outer_dc;
  Rect region;
  std::vector<Aperture> apertures;
};

// Fabrication-stack facts carried for the lumped aperture model and reports;
// the field kernel itself is a gapless-plane model and ignores thickness.
struct LayoutMetadata {
  double electrode_thickness = 6e-6;   // m
  double ground_gap = 3e-6;            // dielectric gap to buried ground, m
  double cladding_epsilon_r = 3.9;     // relative permittivity of that gap
};

struct TrapLayout {
  Rect sim_region;
  std::vector<Electrode> electrodes;
  LayoutMetadata metadata;

  const Electrode* find(std::string_view id) const;
  Electrode* find(std::string_view id);

  // Throws layout_error: invalid rects, electrodes escaping the sim region or
  // overlapping each other, apertures escaping their electrode or each other,
  // non-positive coating parameters, duplicate ids.
  void validate() const;
};

enum class DriveKind { dc, rf };

struct Excitation {
  double amplitude = 0.0;  // volts
  double phase = 0.0;      // radians
  DriveKind kind = DriveKind::dc;
};

// Electrode id -> excitation; absent ids are grounded.
struct Drive {
  std::vector<std::pair<std::string, Excitation>> excitations;
  double rf_omega = 0.0;  // rad/s

  const Excitation* find(std::string_view id) const;
  void set(std::string_view id, Excitation e);
};

// The reference five-wire layout used throughout: 44.3 um center-DC strips,
// 150 um RF rails, five 996 um outer-DC segments per side on a 1001 um pitch,
// 5 um grounded gaps, 2.4 x 5 mm simulated region.
TrapLayout build_reference_layout();

// Both RF rails at u_rf volts, phase 0; every DC electrode pinned to 0 V.
Drive build_reference_drive(double u_rf = 100.0,
                            double rf_omega = constants::two_pi * 16e6);

// Solid metal patches plus the holes, for superposition: electrode potential
// = sum(solids) = region - sum(holes).  Solids are disjoint and, together
// with the holes, tile the region exactly.
struct PatchSet {
  std::vector<Rect> solids;
  std::vector<Rect> holes;  // one per aperture, same order
};
PatchSet decompose(const Electrode& e);

// Mirror apertures to enforce a symmetry: Axis::z replicates each aperture at
// -y (symmetry about the trap axis), Axis::y replicates at -z.  Apertures
// already on the mirror plane (within 1 nm) are left alone; a mirrored
// aperture that lands outside every electrode is an error.
enum class Axis { y, z };
TrapLayout symmetrize(const TrapLayout& layout, const std::vector<Axis>& axes);

// Place a square aperture, clipping it against every electrode; each
// positive-area overlap becomes an aperture of that electrode and portions
// over grounded gaps vanish (they are already at ground).  Throws
// layout_error if the square overlaps no electrode.
void add_aperture(TrapLayout& layout, const Aperture& aperture);

const char* to_string(ElectrodeKind k);
const char* to_string(DriveKind k);

}  // namespace surftrap
