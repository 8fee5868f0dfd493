#include "surftrap/rfdynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "surftrap/analysis.hpp"
#include "surftrap/constants.hpp"
#include "surftrap/errors.hpp"

namespace surftrap {

IonSpecies IonSpecies::from_amu(double amu, double charge_e) {
  if (!(amu > 0.0))
    throw std::invalid_argument("IonSpecies::from_amu: mass must be > 0 amu");
  return {amu * constants::atomic_mass_unit, charge_e * constants::elementary_charge};
}

IonSpecies IonSpecies::yb172() { return from_amu(172.0, 1.0); }

double pseudopotential(const PhasorField3& e, const IonSpecies& ion, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("pseudopotential needs omega > 0");
  return ion.charge * ion.charge * amplitude_sq(e) / (4.0 * ion.mass * omega * omega);
}

double pseudopotential(double e_amplitude, const IonSpecies& ion, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("pseudopotential needs omega > 0");
  const double qe = ion.charge * e_amplitude;
  return qe * qe / (4.0 * ion.mass * omega * omega);
}

double pseudopotential_at(const TrapLayout& layout, const Drive& drive,
                          const IonSpecies& ion, const Point3& p) {
  return pseudopotential(layout_field(layout, drive, p), ion, drive.rf_omega);
}

namespace {

using Matrix3 = Eigen::Matrix3d;

// Central-difference Hessian of phi at p with step h; also returns the
// gradient (same stencil) and phi(p).
template <typename Phi>
Matrix3 fd_hessian(Phi&& phi, const Point3& p, double h, double grad[3], double* f0) {
  auto at = [&](double dx, double dy, double dz) {
    return phi(Point3{p.x + dx, p.y + dy, p.z + dz});
  };
  const double f = at(0, 0, 0);
  if (f0) *f0 = f;
  Matrix3 m;
  const double fp[3] = {at(h, 0, 0), at(0, h, 0), at(0, 0, h)};
  const double fm[3] = {at(-h, 0, 0), at(0, -h, 0), at(0, 0, -h)};
  for (int i = 0; i < 3; ++i) {
    m(i, i) = (fp[i] - 2.0 * f + fm[i]) / (h * h);
    if (grad) grad[i] = (fp[i] - fm[i]) / (2.0 * h);
  }
  auto off = [&](int i, int j) {
    double di[3] = {0, 0, 0}, dj[3] = {0, 0, 0};
    di[i] = h;
    dj[j] = h;
    const double a = at(di[0] + dj[0], di[1] + dj[1], di[2] + dj[2]);
    const double b = at(-di[0] - dj[0], -di[1] - dj[1], -di[2] - dj[2]);
    const double c = at(di[0] - dj[0], di[1] - dj[1], di[2] - dj[2]);
    const double d = at(-di[0] + dj[0], -di[1] + dj[1], -di[2] + dj[2]);
    return (a + b - c - d) / (4.0 * h * h);
  };
  m(0, 1) = m(1, 0) = off(0, 1);
  m(0, 2) = m(2, 0) = off(0, 2);
  m(1, 2) = m(2, 1) = off(1, 2);
  return m;
}

// Richardson-extrapolated Hessian: h and h/2 stencils combined to O(h^4).
template <typename Phi>
Matrix3 richardson_hessian(Phi&& phi, const Point3& p, double h, double grad[3]) {
  const Matrix3 coarse = fd_hessian(phi, p, h, grad, nullptr);
  const Matrix3 fine = fd_hessian(phi, p, 0.5 * h, nullptr, nullptr);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

SecularModes secular_frequencies(const TrapLayout& layout, const Drive& drive,
                                 const IonSpecies& ion, const Point3& at,
                                 double step) {
  auto phi = [&](const Point3& p) { return pseudopotential_at(layout, drive, ion, p); };
  double grad[3];
  const Matrix3 h = richardson_hessian(phi, at, step, grad);

  const double hscale = h.cwiseAbs().maxCoeff();
  const double gnorm = std::sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
  if (gnorm > 0.05 * hscale * step)
    throw numeric_error("secular frequencies: point is not stationary "
                        "(|grad| exceeds the curvature scale)");

  Eigen::SelfAdjointEigenSolver<Matrix3> eig(h);
  SecularModes out;
  for (int i = 0; i < 3; ++i) {
    double lambda = eig.eigenvalues()(i);
    // The axial curvature is ~1e-9 of the radial one; forgive FD noise of
    // that order but reject genuinely unstable points.
    if (lambda < 0.0) {
      if (lambda < -1e-6 * hscale)
        throw numeric_error("secular frequencies: negative curvature "
                            "(not a trapping point)");
      lambda = 0.0;
    }
    out.curvature[i] = lambda;
    out.frequency[i] = std::sqrt(lambda / ion.mass) / constants::two_pi;
    out.axis[i] = {eig.eigenvectors()(0, i), eig.eigenvectors()(1, i),
                   eig.eigenvectors()(2, i)};
  }
  return out;
}

TrapDepth trap_depth(const TrapLayout& layout, const Drive& drive,
                     const IonSpecies& ion, double grid_step) {
  const NullResult null = find_radial_null(layout, drive, 0.0);
  auto phi = [&](const Point3& p) { return pseudopotential_at(layout, drive, ion, p); };
  const double phi0 = phi({null.x, null.y, 0.0});
  const double h = null.x;

  // Scan the z = 0 half-plane above the null: x in (h, 4h], |y| <= 2h.
  const int nx = std::max(4, int(std::lround(3.0 * h / grid_step)));
  const int ny = std::max(5, int(std::lround(4.0 * h / grid_step)) + 1);
  const double dx = 3.0 * h / nx;
  const double dy = 4.0 * h / (ny - 1);
  std::vector<double> grid(size_t(nx) * ny);
  auto gx = [&](int i) { return h + (i + 1) * dx; };  // i = 0..nx-1
  auto gy = [&](int j) { return -2.0 * h + j * dy; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      grid[size_t(i) * ny + j] = phi({gx(i), gy(j), 0.0});

  // Saddle candidates: extremal along x while counter-extremal along y.
  std::vector<std::pair<int, int>> candidates;
  auto g = [&](int i, int j) { return grid[size_t(i) * ny + j]; };
  for (int i = 1; i + 1 < nx; ++i)
    for (int j = 1; j + 1 < ny; ++j) {
      const double c = g(i, j);
      const bool xmax = c >= g(i - 1, j) && c >= g(i + 1, j);
      const bool xmin = c <= g(i - 1, j) && c <= g(i + 1, j);
      const bool ymax = c >= g(i, j - 1) && c >= g(i, j + 1);
      const bool ymin = c <= g(i, j - 1) && c <= g(i, j + 1);
      if ((xmax && ymin && !ymax) || (ymax && xmin && !xmax))
        candidates.emplace_back(i, j);
    }

  struct Saddle {
    double x, y, phi;
  };
  std::vector<Saddle> found;
  const double fd = 0.25e-6;
  for (auto [ci, cj] : candidates) {
    // Newton on the in-plane gradient.
    double x = gx(ci), y = gy(cj);
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      auto p2 = [&](double ddx, double ddy) { return phi({x + ddx, y + ddy, 0.0}); };
      const double f0 = p2(0, 0);
      const double gp[2] = {(p2(fd, 0) - p2(-fd, 0)) / (2 * fd),
                            (p2(0, fd) - p2(0, -fd)) / (2 * fd)};
      const double hxx = (p2(fd, 0) - 2 * f0 + p2(-fd, 0)) / (fd * fd);
      const double hyy = (p2(0, fd) - 2 * f0 + p2(0, -fd)) / (fd * fd);
      const double hxy = (p2(fd, fd) + p2(-fd, -fd) - p2(fd, -fd) - p2(-fd, fd)) /
                         (4 * fd * fd);
      const double det = hxx * hyy - hxy * hxy;
      if (det == 0.0) break;
      double sx = -(hyy * gp[0] - hxy * gp[1]) / det;
      double sy = -(hxx * gp[1] - hxy * gp[0]) / det;
      const double len = std::hypot(sx, sy);
      if (len > grid_step) {  // keep refinement local to the candidate cell
        sx *= grid_step / len;
        sy *= grid_step / len;
      }
      x += sx;
      y += sy;
      if (std::hypot(sx, sy) < 1e-11) {
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    const double slack = grid_step;
    if (!(x > h + 0.5 * dx - slack && x <= 4.0 * h + slack && std::abs(y) <= 2.0 * h + slack))
      continue;
    // Genuine escape saddle: exactly one negative Hessian eigenvalue.
    const Matrix3 hess = richardson_hessian(phi, {x, y, 0.0}, 0.5e-6, nullptr);
    Eigen::SelfAdjointEigenSolver<Matrix3> eig(hess);
    const double scale = hess.cwiseAbs().maxCoeff();
    int negatives = 0;
    for (int k = 0; k < 3; ++k)
      if (eig.eigenvalues()(k) < -1e-5 * scale) ++negatives;
    if (negatives != 1) continue;
    found.push_back({x, y, phi({x, y, 0.0})});
  }
  if (found.empty())
    throw numeric_error("trap depth: no escape saddle found in the search region");

  // Lowest saddle wins; near-ties resolve lexicographically in (x, y).
  std::sort(found.begin(), found.end(), [](const Saddle& a, const Saddle& b) {
    if (std::abs(a.phi - b.phi) > 1e-9 * std::max(std::abs(a.phi), std::abs(b.phi)))
      return a.phi < b.phi;
    if (std::abs(a.x - b.x) > 1e-9) return a.x < b.x;
    return a.y < b.y;
  });
  const Saddle& best = found.front();
  TrapDepth out;
  out.depth_ev = (best.phi - phi0) / constants::elementary_charge;
  out.escape = {best.x, best.y, 0.0};
  return out;
}

MathieuQ mathieu_q(double nu_radial, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("mathieu_q needs omega > 0");
  MathieuQ out;
  out.q = 2.0 * std::sqrt(2.0) * (constants::two_pi * nu_radial) / omega;
  out.stable = out.q < 0.908;
  return out;
}

Micromotion micromotion(double e_residual, const IonSpecies& ion, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("micromotion needs omega > 0");
  Micromotion out;
  out.amplitude = ion.charge * e_residual / (ion.mass * omega * omega);
  // Second-order Doppler: -<v^2>/2c^2 of the driven motion.
  const double v = out.amplitude * omega;
  out.fractional_shift = -v * v / (4.0 * constants::speed_of_light *
                                   constants::speed_of_light);
  return out;
}

}  // namespace surftrap
