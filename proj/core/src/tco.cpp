#include "surftrap/tco.hpp"

#include <stdexcept>

#include "surftrap/constants.hpp"

namespace surftrap {

double TcoModel::resistance() const {
  if (!(sigma > 0.0) || !(thickness > 0.0))
    throw std::invalid_argument("tco: sigma and thickness must be > 0");
  return alpha / (sigma * thickness);
}

double TcoModel::capacitance() const {
  if (!(patch_area > 0.0) || !(ground_gap > 0.0))
    throw std::invalid_argument("tco: patch area and ground gap must be > 0");
  return constants::epsilon0 * epsilon_r * patch_area / ground_gap;
}

TcoModel TcoModel::for_aperture(const Aperture& a, const LayoutMetadata& meta) {
  TcoModel m;
  if (a.coating) {
    m.sigma = a.coating->sigma;
    m.thickness = a.coating->thickness;
  }
  m.patch_area = a.patch.area();
  m.ground_gap = meta.ground_gap;
  m.epsilon_r = meta.cladding_epsilon_r;
  return m;
}

std::complex<double> tco_transfer(const TcoModel& model, double omega) {
  const double orc = omega * model.resistance() * model.capacitance();
  return 1.0 / std::complex<double>(1.0, orc);
}

std::complex<double> coated_hole_drive(const TcoModel& model, double omega,
                                       std::complex<double> electrode_drive) {
  return tco_transfer(model, omega) * electrode_drive;
}

double tco_crossover_sigma(const TcoModel& model, double omega) {
  // Omega R C = 1 with R = alpha / (sigma t).
  if (!(omega > 0.0)) throw std::invalid_argument("tco: omega must be > 0");
  return model.alpha * omega * model.capacitance() / model.thickness;
}

}  // namespace surftrap
