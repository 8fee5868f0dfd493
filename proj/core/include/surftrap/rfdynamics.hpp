#pragma once

// Time-averaged RF dynamics: ponderomotive pseudopotential, secular mode
// frequencies from its Hessian, trap depth via escape-saddle search, Mathieu
// stability, and residual-field micromotion.

#include <array>

#include "surftrap/fieldkernel.hpp"
#include "surftrap/geometry.hpp"

namespace surftrap {

struct IonSpecies {
  double mass = 0.0;    // kg
  double charge = 0.0;  // C

  static IonSpecies from_amu(double amu, double charge_e = 1.0);
  // 172Yb+, the ion used by the reference studies.
  static IonSpecies yb172();
};

// Ponderomotive energy q^2 |E|^2 / (4 m Omega^2) in joules; |E|^2 from the
// phasor amplitudes.  Throws std::invalid_argument if omega <= 0.
double pseudopotential(const PhasorField3& e, const IonSpecies& ion, double omega);
double pseudopotential(double e_amplitude, const IonSpecies& ion, double omega);

// Pseudopotential of the layout's RF drive at a point.
double pseudopotential_at(const TrapLayout& layout, const Drive& drive,
                          const IonSpecies& ion, const Point3& p);

struct SecularModes {
  std::array<double, 3> frequency = {};    // Hz, ascending
  std::array<double, 3> curvature = {};    // Hessian eigenvalues, J/m^2, ascending
  std::array<Vec3, 3> axis = {};           // unit eigenvectors, same order
};

// Mode frequencies nu_i = sqrt(lambda_i / m) / 2pi from the pseudopotential
// Hessian at `at` (central differences, Richardson-extrapolated).  Throws
// numeric_error if `at` is not a stationary point or any curvature is
// negative (not a trapping point).
SecularModes secular_frequencies(const TrapLayout& layout, const Drive& drive,
                                 const IonSpecies& ion, const Point3& at,
                                 double step = 0.5e-6);

struct TrapDepth {
  double depth_ev = 0.0;   // Phi(escape) - Phi(null), eV
  Point3 escape;           // lowest escape saddle
};

// Finds the radial null, then the lowest saddle of the pseudopotential in the
// z = 0 half-plane above it (grid scan + Newton polish; a saddle must have
// exactly one negative Hessian eigenvalue).  Throws numeric_error if no null
// or no saddle is found.
TrapDepth trap_depth(const TrapLayout& layout, const Drive& drive,
                     const IonSpecies& ion, double grid_step = 2e-6);

struct MathieuQ {
  double q = 0.0;
  bool stable = false;  // lowest-region criterion q < 0.908
};

// q = 2 sqrt(2) omega_sec / Omega from a radial secular frequency (Hz).
MathieuQ mathieu_q(double nu_radial, double omega);

struct Micromotion {
  double amplitude = 0.0;         // driven motion amplitude q|E|/(m Omega^2), m
  double fractional_shift = 0.0;  // second-order Doppler shift, dimensionless
};

// Excess micromotion for a residual RF field amplitude at the ion (V/m).
Micromotion micromotion(double e_residual, const IonSpecies& ion, double omega);

}  // namespace surftrap
