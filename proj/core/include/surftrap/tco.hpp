#pragma once

// Lumped RC model of a transparent-conductive-oxide aperture fill.  The film
// couples to the electrode rim through a sheet resistance and to the buried
// ground through the cladding capacitance; its drive transfer is a one-pole
// low-pass H = 1 / (1 + i Omega R C).

#include <complex>

#include "surftrap/geometry.hpp"

namespace surftrap {

struct TcoModel {
  double sigma = 0.0;          // film conductivity, S/m
  double thickness = 50e-9;    // film thickness, m
  double patch_area = 0.0;     // aperture area (w_a^2 for squares), m^2
  double ground_gap = 3e-6;    // dielectric gap to buried ground, m
  double epsilon_r = 3.9;      // cladding relative permittivity
  double alpha = 1.0;          // dimensionless access-resistance geometry factor

  double resistance() const;   // R = alpha / (sigma * thickness), ohms
  double capacitance() const;  // C = eps0 epsilon_r * area / gap, farads

  static TcoModel for_aperture(const Aperture& a, const LayoutMetadata& meta);
};

// H(Omega) = 1 / (1 + i Omega R C).  sigma -> inf gives exactly 1 (the fill
// rides the electrode, aperture disappears); sigma -> 0 gives 0 (floating
// fill, plain hole).
std::complex<double> tco_transfer(const TcoModel& model, double omega);

// Effective drive phasor of the fill itself: H * V e^{i phase}.
std::complex<double> coated_hole_drive(const TcoModel& model, double omega,
                                       std::complex<double> electrode_drive);

// Conductivity at which |H| = 1/sqrt(2), i.e. Omega R C = 1.
double tco_crossover_sigma(const TcoModel& model, double omega);

}  // namespace surftrap
