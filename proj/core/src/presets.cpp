#include <cmath>

#include "surftrap/config.hpp"
#include "surftrap/runner.hpp"

namespace surftrap {

namespace {

using constants::um;

Experiment base_experiment(const std::string& name) {
  Experiment e;
  e.name = name;
  e.layout = build_reference_layout();
  e.drive = build_reference_drive();
  e.ion = IonSpecies::yb172();
  return e;
}

std::vector<SweepValue> linspace_um(double a_um, double b_um, double step_um) {
  std::vector<SweepValue> v;
  for (double x = a_um; x <= b_um + 0.5 * step_um; x += step_um)
    v.emplace_back(x * um);
  return v;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"single-aperture-three-electrodes",
          "wa-sweep",
          "reference-axial",
          "symmetry-study",
          "tco-conductivity",
          "pz-sweep",
          "py-sweep",
          "gap-crossing"};
}

Experiment make_preset(const std::string& name) {
  using AK = AnalysisKind;
  Experiment e = base_experiment(name);

  if (name == "single-aperture-three-electrodes") {
    // One 30 um aperture recentered in each electrode kind.
    e.apertures = {{126.8 * um, 0.0, 30 * um, std::nullopt}};
    e.variable = SweepVariable::electrode;
    e.values = {std::string("rf"), std::string("center-dc"), std::string("outer-dc")};
    e.analyses = {AK::null_point, AK::displacement, AK::axial_scan, AK::peak_metrics,
                  AK::trap_metrics};
    return e;
  }
  if (name == "wa-sweep") {
    e.apertures = {{126.8 * um, 0.0, 30 * um, std::nullopt}};
    e.variable = SweepVariable::w_a;
    e.values = linspace_um(10, 100, 10);
    e.analyses = {AK::null_point, AK::displacement, AK::peak_metrics};
    return e;
  }
  if (name == "reference-axial") {
    // The unmodified trap: axial field profile and trap metrics.  Peak
    // metrics are requested too; on the clean trap most components have no
    // usable peak, which exercises the per-component notes.
    e.variable = SweepVariable::symmetry;
    e.values = {std::string(kSymmetryReference)};
    e.analyses = {AK::axial_scan, AK::peak_metrics, AK::trap_metrics};
    return e;
  }
  if (name == "symmetry-study") {
    // Aperture off-axis in y and z, then mirrored into a pair and a quad.
    e.apertures = {{126.8 * um, 100 * um, 30 * um, std::nullopt}};
    e.variable = SweepVariable::symmetry;
    e.values = {std::string(kSymmetrySingle), std::string(kSymmetryZMirrored),
                std::string(kSymmetryFullyMirrored)};
    e.analyses = {AK::null_point, AK::displacement, AK::axial_scan, AK::peak_metrics};
    return e;
  }
  if (name == "tco-conductivity") {
    e.apertures = {{126.8 * um, 0.0, 30 * um, TcoCoating{1.0, 50e-9}}};
    e.variable = SweepVariable::sigma;
    for (int k = 0; k <= 11 * 12; ++k)  // 1e-3 .. 1e8 S/m, 12 points per decade
      e.values.emplace_back(std::pow(10.0, -3.0 + k / 12.0));
    e.analyses = {AK::null_point, AK::displacement};
    return e;
  }
  if (name == "pz-sweep") {
    e.apertures = {{126.8 * um, 0.0, 30 * um, std::nullopt}};
    e.variable = SweepVariable::p_z;
    e.values = linspace_um(0, 600, 25);
    e.analyses = {AK::null_point, AK::displacement};
    return e;
  }
  if (name == "py-sweep") {
    e.apertures = {{126.8 * um, 0.0, 30 * um, std::nullopt}};
    e.variable = SweepVariable::p_y;
    e.values = linspace_um(100, 180, 5);
    e.analyses = {AK::null_point, AK::displacement, AK::peak_metrics};
    return e;
  }
  if (name == "gap-crossing") {
    // Slide the aperture across the center-DC / RF gap (gap spans 46.8-51.8 um).
    e.apertures = {{49.3 * um, 0.0, 30 * um, std::nullopt}};
    e.variable = SweepVariable::p_y;
    e.values = linspace_um(30, 70, 2.5);
    e.analyses = {AK::null_point, AK::displacement};
    return e;
  }
  throw layout_error("unknown preset '" + name + "'");
}

}  // namespace surftrap
