#include "surftrap/fieldkernel.hpp"

#include <cmath>
#include <stdexcept>

#include "surftrap/tco.hpp"

namespace surftrap {

namespace {

constexpr double kInv2Pi = 1.0 / constants::two_pi;

void require_above_plane(const Point3& p) {
  if (!(p.x > 0.0))
    throw std::invalid_argument("field point must lie above the electrode plane (x > 0)");
}

// Corner iteration: u = y_c - y, v = z_c - z, sign = (+ for max corner) *
// (+ for max corner).  The atan2(u v, x r) form needs no further argument
// reduction; it stays accurate arbitrarily close to the plane.
template <typename F>
void for_corners(const Rect& patch, const Point3& p, F&& f) {
  const double us[2] = {patch.y_min - p.y, patch.y_max - p.y};
  const double vs[2] = {patch.z_min - p.z, patch.z_max - p.z};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double s = (i == j) ? 1.0 : -1.0;  // (-,-) and (+,+) positive
      f(s, us[i], vs[j]);
    }
}

}  // namespace

double amplitude_sq(const PhasorField3& e) {
  return std::norm(e.x) + std::norm(e.y) + std::norm(e.z);
}

double radial_amplitude(const PhasorField3& e) {
  return std::sqrt(std::norm(e.x) + std::norm(e.y));
}

double patch_potential(const Rect& patch, const Point3& p) {
  require_above_plane(p);
  const double x = p.x;
  double acc = 0.0;
  for_corners(patch, p, [&](double s, double u, double v) {
    const double r = std::sqrt(u * u + v * v + x * x);
    acc += s * std::atan2(u * v, x * r);
  });
  return kInv2Pi * acc;
}

Vec3 patch_field(const Rect& patch, const Point3& p) {
  require_above_plane(p);
  const double x = p.x;
  Vec3 e;
  for_corners(patch, p, [&](double s, double u, double v) {
    const double x2 = x * x;
    const double a = u * u + x2;
    const double b = v * v + x2;
    const double r = std::sqrt(u * u + v * v + x2);
    e.x += s * u * v * (r * r + x2) / (r * a * b);
    e.y += s * v * x / (r * a);
    e.z += s * u * x / (r * b);
  });
  e.x *= kInv2Pi;
  e.y *= kInv2Pi;
  e.z *= kInv2Pi;
  return e;
}

Mat3 patch_field_jacobian(const Rect& patch, const Point3& p) {
  require_above_plane(p);
  const double x = p.x;
  Mat3 j;
  for_corners(patch, p, [&](double s, double u, double v) {
    const double x2 = x * x;
    const double a = u * u + x2;
    const double b = v * v + x2;
    const double r2 = u * u + v * v + x2;
    const double r = std::sqrt(r2);
    const double r3 = r2 * r;
    // Second derivatives of the corner's potential term w.r.t. (u, v, x);
    // the mixed u-v term collapses to x / r^3.
    const double t_uu = -u * v * x * (2.0 * r2 + a) / (a * a * r3);
    const double t_vv = -u * v * x * (2.0 * r2 + b) / (b * b * r3);
    const double t_xu = v * (u * u * r2 - x2 * (r2 + a)) / (a * a * r3);
    const double t_xv = u * (v * v * r2 - x2 * (r2 + b)) / (b * b * r3);
    const double t_uv = x / r3;
    j[0][0] += s * (t_uu + t_vv);  // harmonic: f_xx = -(f_uu + f_vv)
    j[0][1] += s * t_xu;
    j[0][2] += s * t_xv;
    j[1][1] -= s * t_uu;
    j[1][2] -= s * t_uv;
    j[2][2] -= s * t_vv;
  });
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (b >= a)
        j[a][b] *= kInv2Pi;
  j[1][0] = j[0][1];
  j[2][0] = j[0][2];
  j[2][1] = j[1][2];
  return j;
}

namespace {

// Shared superposition walk: calls emit(scale, patch) for every solid-metal
// contribution, where holes arrive as negative-amplitude patches.
template <typename Emit>
void superpose(const TrapLayout& layout, const Drive& drive, DriveKind which,
               Emit&& emit) {
  for (const auto& [id, exc] : drive.excitations) {
    const Electrode* e = layout.find(id);
    if (!e) throw layout_error("drive references unknown electrode '" + id + "'");
    if (exc.kind != which || exc.amplitude == 0.0) continue;
    const phasor scale = std::polar(exc.amplitude, exc.phase);
    emit(scale, e->region);
    for (const auto& a : e->apertures) {
      phasor h = 0.0;  // uncoated: the hole floats at ground
      if (a.coating)
        h = tco_transfer(TcoModel::for_aperture(a, layout.metadata), drive.rf_omega);
      const phasor deficit = (1.0 - h) * scale;
      if (deficit != 0.0) emit(-deficit, a.patch);
    }
  }
}

}  // namespace

phasor layout_potential(const TrapLayout& layout, const Drive& drive,
                        const Point3& p, DriveKind which) {
  phasor acc = 0.0;
  superpose(layout, drive, which, [&](phasor scale, const Rect& patch) {
    acc += scale * patch_potential(patch, p);
  });
  return acc;
}

PhasorField3 layout_field(const TrapLayout& layout, const Drive& drive,
                          const Point3& p, DriveKind which) {
  PhasorField3 acc;
  superpose(layout, drive, which, [&](phasor scale, const Rect& patch) {
    const Vec3 e = patch_field(patch, p);
    acc.x += scale * e.x;
    acc.y += scale * e.y;
    acc.z += scale * e.z;
  });
  return acc;
}

PhasorMat3 layout_field_jacobian(const TrapLayout& layout, const Drive& drive,
                                 const Point3& p, DriveKind which) {
  PhasorMat3 acc;
  superpose(layout, drive, which, [&](phasor scale, const Rect& patch) {
    const Mat3 j = patch_field_jacobian(patch, p);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        acc[a][b] += scale * j[a][b];
  });
  return acc;
}

}  // namespace surftrap
