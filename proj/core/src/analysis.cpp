#include "surftrap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "surftrap/errors.hpp"

namespace surftrap {

namespace {

constexpr double kHessStep = 0.1e-6;   // FD step for the Hessian of f, m
constexpr double kStepTol = 1e-12;     // Newton convergence, m
constexpr double kGradRelTol = 1e-14;  // gradient-norm stagnation
constexpr int kMaxIters = 200;

struct RadialObjective {
  const TrapLayout& layout;
  const Drive& drive;
  double z;

  double f(double x, double y) const {
    const PhasorField3 e = layout_field(layout, drive, {x, y, z});
    return std::norm(e.x) + std::norm(e.y);
  }
  // f plus its analytic gradient via the field Jacobian.
  double fg(double x, double y, double g[2]) const {
    const Point3 p{x, y, z};
    const PhasorField3 e = layout_field(layout, drive, p);
    const PhasorMat3 j = layout_field_jacobian(layout, drive, p);
    g[0] = 2.0 * (std::conj(e.x) * j[0][0] + std::conj(e.y) * j[1][0]).real();
    g[1] = 2.0 * (std::conj(e.x) * j[0][1] + std::conj(e.y) * j[1][1]).real();
    return std::norm(e.x) + std::norm(e.y);
  }
  // Central-difference Hessian of f.
  void hess(double x, double y, double h[2][2], double f0) const {
    const double d = kHessStep;
    const double fxp = f(x + d, y), fxm = f(x - d, y);
    const double fyp = f(x, y + d), fym = f(x, y - d);
    h[0][0] = (fxp - 2.0 * f0 + fxm) / (d * d);
    h[1][1] = (fyp - 2.0 * f0 + fym) / (d * d);
    const double fpp = f(x + d, y + d), fmm = f(x - d, y - d);
    const double fpm = f(x + d, y - d), fmp = f(x - d, y + d);
    h[0][1] = h[1][0] = (fpp + fmm - fpm - fmp) / (4.0 * d * d);
  }
};

}  // namespace

NullResult find_radial_null(const TrapLayout& layout, const Drive& drive,
                            double z, std::optional<Point3> guess) {
  const RadialObjective obj{layout, drive, z};
  double x = guess ? guess->x : 100e-6;
  double y = guess ? guess->y : 0.0;
  if (!(x > 0.0)) throw std::invalid_argument("null guess must have x > 0");

  double g[2];
  double f0 = obj.fg(x, y, g);
  double gnorm_prev = std::hypot(g[0], g[1]);
  NullResult out;
  bool converged = (gnorm_prev == 0.0);

  int it = 0;
  for (; it < kMaxIters && !converged; ++it) {
    double h[2][2];
    obj.hess(x, y, h, f0);

    // Newton direction when the local model is convex, else steepest descent.
    double dx, dy;
    const double det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if (det > 0.0 && h[0][0] > 0.0) {
      dx = -(h[1][1] * g[0] - h[0][1] * g[1]) / det;
      dy = -(h[0][0] * g[1] - h[1][0] * g[0]) / det;
    } else {
      const double gn = std::hypot(g[0], g[1]);
      const double scale = std::min(5e-6, 2.0 * f0 / (gn * gn) * gn) / gn;
      dx = -g[0] * scale;
      dy = -g[1] * scale;
    }

    // Backtrack to a decrease, keeping the iterate above the plane.
    double alpha = 1.0;
    double fn = f0;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt, alpha *= 0.5) {
      const double xt = x + alpha * dx, yt = y + alpha * dy;
      if (xt <= 1e-9) continue;
      fn = obj.f(xt, yt);
      if (fn <= f0) {
        x = xt;
        y = yt;
        moved = true;
        break;
      }
    }
    if (!moved) {
      converged = true;  // at the numerical floor, no descent left
      break;
    }
    out.final_step = alpha * std::hypot(dx, dy);
    f0 = obj.fg(x, y, g);
    const double gnorm = std::hypot(g[0], g[1]);
    if (out.final_step < kStepTol) converged = true;
    else if (gnorm_prev > 0.0 &&
             (gnorm_prev - gnorm) < kGradRelTol * gnorm_prev)
      converged = true;
    gnorm_prev = gnorm;
  }
  if (!converged)
    throw numeric_error("radial null search did not converge within " +
                        std::to_string(kMaxIters) + " iterations");

  // A genuine null is a minimum of f; a saddle or max means the guess left
  // the trapping region.
  double h[2][2];
  obj.hess(x, y, h, obj.f(x, y));
  if (!(h[0][0] > 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0))
    throw numeric_error("radial null search converged to a non-minimum "
                        "(guess outside the trapping region)");

  out.x = x;
  out.y = y;
  out.residual = std::sqrt(obj.f(x, y));
  out.iterations = it;
  return out;
}

Displacement displacement(const TrapLayout& layout, const Drive& drive, double z) {
  const TrapLayout reference = build_reference_layout();
  Displacement d;
  d.reference = find_radial_null(reference, drive, z);
  d.modified = find_radial_null(layout, drive, z,
                                Point3{d.reference.x, d.reference.y, z});
  d.dx = d.modified.x - d.reference.x;
  d.dy = d.modified.y - d.reference.y;
  const PhasorField3 e =
      layout_field(layout, drive, {d.reference.x, d.reference.y, z});
  d.residual_at_reference = std::sqrt(amplitude_sq(e));
  return d;
}

AxialScan axial_scan(const TrapLayout& layout, const Drive& drive,
                     double z_min, double z_max, int samples, double height) {
  if (samples < 2) throw std::invalid_argument("axial scan needs >= 2 samples");
  if (!(z_max > z_min)) throw std::invalid_argument("axial scan needs z_max > z_min");
  AxialScan scan;
  scan.height = std::isnan(height) ? find_radial_null(layout, drive, 0.0).x : height;
  scan.z.resize(samples);
  scan.field.resize(samples);
  const double dz = (z_max - z_min) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    scan.z[i] = z_min + i * dz;
    scan.field[i] = layout_field(layout, drive, {scan.height, 0.0, scan.z[i]});
  }
  return scan;
}

phasor phasor_component(const PhasorField3& e, FieldComponent c) {
  switch (c) {
    case FieldComponent::ex: return e.x;
    case FieldComponent::ey: return e.y;
    case FieldComponent::ez: return e.z;
  }
  return {};
}

const char* to_string(FieldComponent c) {
  switch (c) {
    case FieldComponent::ex: return "ex";
    case FieldComponent::ey: return "ey";
    case FieldComponent::ez: return "ez";
  }
  return "?";
}

namespace {

// Lagrange quadratic through samples (k-1, k, k+1) of (z, w), evaluated at t.
double quad3(const std::vector<double>& z, const std::vector<double>& w,
             size_t k, double t) {
  const double z0 = z[k - 1], z1 = z[k], z2 = z[k + 1];
  const double l0 = (t - z1) * (t - z2) / ((z0 - z1) * (z0 - z2));
  const double l1 = (t - z0) * (t - z2) / ((z1 - z0) * (z1 - z2));
  const double l2 = (t - z0) * (t - z1) / ((z2 - z0) * (z2 - z1));
  return w[k - 1] * l0 + w[k] * l1 + w[k + 1] * l2;
}

size_t nearest_center(const std::vector<double>& z, double t) {
  const auto it = std::lower_bound(z.begin(), z.end(), t);
  size_t k = it == z.end() ? z.size() - 1 : size_t(it - z.begin());
  if (k > 0 && std::abs(z[k - 1] - t) < std::abs(z[k] - t)) --k;
  return std::clamp<size_t>(k, 1, z.size() - 2);
}

}  // namespace

PeakMetrics peak_metrics(const AxialScan& scan, FieldComponent component) {
  const size_t n = scan.z.size();
  if (n < 3 || scan.field.size() != n)
    throw std::invalid_argument("peak metrics: need a scan with >= 3 samples");
  if (scan.z.front() > 0.0 || scan.z.back() < 0.0)
    throw std::invalid_argument("peak metrics: scan must cover z = 0");

  std::vector<double> re(n), im(n), amp(n);
  for (size_t i = 0; i < n; ++i) {
    const phasor c = phasor_component(scan.field[i], component);
    re[i] = c.real();
    im[i] = c.imag();
    amp[i] = std::abs(c);
  }
  const size_t kmax = size_t(std::max_element(amp.begin(), amp.end()) - amp.begin());
  if (!(amp[kmax] > 0.0))
    throw numeric_error(std::string("peak metrics: ") + to_string(component) +
                        " profile is identically zero (no peak)");

  PeakMetrics out;
  out.component = component;

  // Values at z = 0 come from the smooth phasor, not the (possibly cusped)
  // modulus; the signed profile is the phasor projected onto the phase of
  // the strongest sample, which keeps odd profiles signed.
  const size_t k0 = nearest_center(scan.z, 0.0);
  out.amplitude_z0 = std::hypot(quad3(scan.z, re, k0, 0.0), quad3(scan.z, im, k0, 0.0));
  const double argref = std::atan2(im[kmax], re[kmax]);
  std::vector<double> sgn(n);
  for (size_t i = 0; i < n; ++i)
    sgn[i] = re[i] * std::cos(argref) + im[i] * std::sin(argref);
  const double pitch = (scan.z.back() - scan.z.front()) / double(n - 1);
  out.dispersive_gradient =
      (quad3(scan.z, sgn, k0, pitch) - quad3(scan.z, sgn, k0, -pitch)) / (2.0 * pitch);

  if (kmax == 0 || kmax == n - 1)
    throw numeric_error(std::string("peak metrics: ") + to_string(component) +
                        " has no interior peak in the scan window");

  // Parabolic refinement of the peak.
  {
    const double a = amp[kmax - 1], b = amp[kmax], c = amp[kmax + 1];
    const double den = a - 2.0 * b + c;
    if (den < 0.0) {
      const double delta = 0.5 * (a - c) / den;
      out.peak_z = scan.z[kmax] + delta * pitch;
      out.peak_amplitude = b - 0.25 * (a - c) * delta;
    } else {
      out.peak_z = scan.z[kmax];
      out.peak_amplitude = b;
    }
  }

  // Half-max crossings: bracket on the samples, then bisect the local
  // quadratic interpolant of the modulus.
  const double target = 0.5 * out.peak_amplitude;
  auto cross = [&](int dir) {  // dir -1: left of peak, +1: right
    size_t i = kmax;
    while (true) {
      if ((dir < 0 && i == 0) || (dir > 0 && i == n - 1))
        throw numeric_error(std::string("peak metrics: ") + to_string(component) +
                            " half-maximum not bracketed " +
                            (dir < 0 ? "left" : "right") + " of the peak");
      const size_t j = dir < 0 ? i - 1 : i + 1;
      if (amp[j] < target) {
        // Bisection between samples i and j on the fixed-center interpolant.
        const size_t k = std::clamp<size_t>(std::min(i, j), 1, n - 2);
        double lo = scan.z[std::min(i, j)], hi = scan.z[std::max(i, j)];
        auto m = [&](double t) { return quad3(scan.z, amp, k, t); };
        double flo = m(lo) - target;
        for (int b = 0; b < 60; ++b) {
          const double mid = 0.5 * (lo + hi);
          const double fm = m(mid) - target;
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double zc = 0.5 * (lo + hi);
        const double d = 0.5 * pitch;
        const double slope = (m(zc + d) - m(zc - d)) / (2.0 * d);
        return std::pair<double, double>(zc, std::abs(slope));
      }
      i = j;
    }
  };
  const auto [z_left, slope_left] = cross(-1);
  const auto [z_right, slope_right] = cross(+1);
  out.fwhm = z_right - z_left;
  out.fwhm_gradient = 0.5 * (slope_left + slope_right);

  int inside = 0;
  for (size_t i = 0; i < n; ++i)
    if (scan.z[i] > z_left && scan.z[i] < z_right) ++inside;
  if (inside < 8)
    throw numeric_error(std::string("peak metrics: ") + to_string(component) +
                        " scan too coarse (" + std::to_string(inside) +
                        " samples inside the FWHM, need >= 8)");
  return out;
}

}  // namespace surftrap
