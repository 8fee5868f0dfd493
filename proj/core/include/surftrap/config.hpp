#pragma once

// Experiment description: base layout + drive + apertures + a one-variable
// sweep + the analyses to run.  Built programmatically, from a named preset,
// or parsed from a YAML config file (units there: um / V / MHz / S/m,
// degrees, amu).

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "surftrap/analysis.hpp"
#include "surftrap/geometry.hpp"
#include "surftrap/rfdynamics.hpp"

namespace surftrap {

enum class SweepVariable { p_y, p_z, w_a, sigma, symmetry, electrode };

// Numeric sweeps (p_y, p_z, w_a in meters; sigma in S/m) use doubles; the
// symmetry and electrode sweeps use labels.
using SweepValue = std::variant<double, std::string>;

// symmetry sweep labels.
inline constexpr const char* kSymmetryReference = "reference";       // no apertures
inline constexpr const char* kSymmetrySingle = "single";             // as listed
inline constexpr const char* kSymmetryZMirrored = "z-mirrored";      // + pair at -y
inline constexpr const char* kSymmetryFullyMirrored = "fully-mirrored";  // quad

// electrode sweep labels ("rf", "center-dc", "outer-dc"): the aperture is
// recentered in an electrode of that kind.

enum class AnalysisKind { null_point, displacement, axial_scan, peak_metrics, trap_metrics };

struct ScanSettings {
  double z_min = -1e-3;  // m
  double z_max = 1e-3;
  int samples = 2001;
};

// A square aperture request; placed with add_aperture (so it may be clipped
// against electrode boundaries).
struct ApertureSpec {
  double p_y = 0.0;  // m
  double p_z = 0.0;
  double w_a = 0.0;
  std::optional<TcoCoating> coating;
};

struct Experiment {
  std::string name;
  TrapLayout layout;               // base layout, no sweep apertures yet
  Drive drive;
  IonSpecies ion = IonSpecies::yb172();
  std::vector<ApertureSpec> apertures;
  std::vector<Axis> symmetrize_axes;  // applied after placement (non-symmetry sweeps)
  SweepVariable variable = SweepVariable::p_y;
  std::vector<SweepValue> values;     // sweep applies to apertures[0]
  std::vector<AnalysisKind> analyses;
  ScanSettings scan;
  std::string csv_name;               // output stems; empty = derived from name
  std::string json_name;

  // Throws layout_error on an inconsistent description (empty value list,
  // sweep without an aperture, sigma sweep on an uncoated aperture, unknown
  // labels, ...).  Also validates the base layout.
  void validate() const;
};

// Parse / serialize the YAML config format (see docs/example-config.yaml).
// load_config throws config_error with file:line:column positions.
Experiment load_config(const std::filesystem::path& path);
Experiment parse_config(const std::string& yaml_text, const std::string& filename);
std::string to_yaml(const Experiment& e);

const char* to_string(SweepVariable v);
const char* to_string(AnalysisKind a);

}  // namespace surftrap
