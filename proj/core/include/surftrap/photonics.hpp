#pragma once

// Grating-coupler emission design: first-order Bragg relation between grating
// period, effective index, and free-space emission angle, plus the beam
// back-propagation sizing an aperture for a target ion-plane waist.

#include <optional>
#include <string>
#include <vector>

#include "surftrap/geometry.hpp"

namespace surftrap {

// Angles are measured from the surface normal in the grating's dispersion
// plane; negative angles mean back-emission.  All lengths in meters.

// Period emitting order m at angle theta: Lambda = m lambda / (n_eff - sin theta).
// Throws std::invalid_argument when n_eff <= sin(theta) (no forward solution)
// or m < 1.
double grating_period(double n_eff, double wavelength, int order, double theta);

// Emission angle of order m for a given period; nullopt when the order is
// evanescent (|n_eff - m lambda / Lambda| > 1).
std::optional<double> emission_angle(double n_eff, double wavelength, int order,
                                     double period);

// d theta / d Lambda = m lambda / (Lambda^2 cos theta), rad/m.
double angle_sensitivity(double n_eff, double wavelength, int order, double period);

struct GratingOrder {
  int order = 0;
  double angle = 0.0;  // rad
};
// All propagating orders m >= 1 of a period, ascending in m.
std::vector<GratingOrder> propagating_orders(double n_eff, double wavelength,
                                             double period);

// sin(theta2) = 2 sin(theta1) - n_eff: the first-order angle at which the
// second order starts to propagate (sin(theta2) = -1 onset).
double second_order_onset(double n_eff);

// Square aperture side for a Gaussian beam focused to waist w_ion at height h
// above the plane, emitted at angle theta: slant distance d = h / cos(theta),
// surface radius w_s = w_ion sqrt(1 + (d/z_R)^2), side = 2 k w_s / cos(theta)
// + margin.
double aperture_for_beam(double height, double theta, double wavelength,
                         double w_ion, double k = 1.5, double margin = 2e-6);

// Calibrated effective indices for the reference waveguide stacks.
struct GratingPreset {
  std::string name;
  double n_eff = 0.0;
  double wavelength = 0.0;
  std::string note;
};
const std::vector<GratingPreset>& grating_presets();
const GratingPreset* find_grating_preset(const std::string& name);

// One-stop design summary used by the CLI.
struct GratingDesign {
  double n_eff = 0.0;
  double wavelength = 0.0;
  int order = 1;
  double theta = 0.0;            // rad
  double period = 0.0;           // m
  double feature = 0.0;          // Lambda / 2, m
  double sensitivity = 0.0;      // rad/m
  std::vector<GratingOrder> orders;
  double period_tolerance = 0.0; // +/- Delta Lambda used below, m
  double angle_error = 0.0;      // sensitivity * tolerance, rad
  double beam_offset = 0.0;      // ion-plane walk h * (tan(theta+err) - tan(theta)), m
};
GratingDesign design_grating(double n_eff, double wavelength, int order,
                             double theta, double ion_height,
                             double period_tolerance);

}  // namespace surftrap
