#include <doctest.h>

#include <cmath>
#include <complex>

#include <surftrap/fieldkernel.hpp>
#include <surftrap/geometry.hpp>
#include <surftrap/tco.hpp>

using namespace surftrap;
namespace c = surftrap::constants;

namespace {
const double kOmega = c::two_pi * 16e6;

TcoModel model_for_width(double w, double sigma) {
  TcoModel m;
  m.sigma = sigma;
  m.patch_area = w * w;
  return m;
}
}  // namespace

TEST_SUITE("tco") {

TEST_CASE("sheet resistance and gap capacitance") {
  TcoModel m = model_for_width(30e-6, 1e5);
  CHECK(m.resistance() == doctest::Approx(200.0));
  // eps0 * 3.9 * (30 um)^2 / 3 um
  CHECK(m.capacitance() == doctest::Approx(1.0359399767e-14).epsilon(1e-9));

  m.alpha = 2.5;
  CHECK(m.resistance() == doctest::Approx(500.0));

  CHECK_THROWS_AS((void)model_for_width(30e-6, -1.0).resistance(),
                  std::invalid_argument);
  TcoModel bad = model_for_width(30e-6, 1e5);
  bad.ground_gap = 0.0;
  CHECK_THROWS_AS((void)bad.capacitance(), std::invalid_argument);
}

TEST_CASE("transfer function limits and crossover") {
  SUBCASE("metallic limit is unity to the last bit of the real part") {
    // Omega*R*C ~ 2e-307 is denormal, so the imaginary part is not exactly
    // zero, but it is hundreds of orders of magnitude below any field it
    // could perturb.
    const phasor h = tco_transfer(model_for_width(30e-6, 1e308), kOmega);
    CHECK(h.real() == 1.0);
    CHECK(std::abs(h.imag()) < 1e-300);
  }
  SUBCASE("insulating limit vanishes") {
    CHECK(std::abs(tco_transfer(model_for_width(30e-6, 1e-12), kOmega)) < 1e-10);
  }
  SUBCASE("half-power point") {
    TcoModel probe = model_for_width(30e-6, 1.0);
    const double sigma_star = tco_crossover_sigma(probe, kOmega);
    CHECK(sigma_star == doctest::Approx(20.8288).epsilon(1e-4));
    const phasor h = tco_transfer(model_for_width(30e-6, sigma_star), kOmega);
    CHECK(std::abs(h) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::arg(h) == doctest::Approx(-c::pi / 4.0).epsilon(1e-12));
  }
  SUBCASE("|H| increases monotonically with conductivity") {
    double prev = 0.0;
    for (double logs = -3.0; logs <= 8.0; logs += 0.25) {
      const double mag =
          std::abs(tco_transfer(model_for_width(30e-6, std::pow(10.0, logs)), kOmega));
      CHECK(mag > prev);
      prev = mag;
    }
    CHECK(prev > 0.999);
  }
  SUBCASE("phase stays in the lag quadrant") {
    for (double logs = -2.0; logs <= 7.0; logs += 0.5) {
      const phasor h =
          tco_transfer(model_for_width(30e-6, std::pow(10.0, logs)), kOmega);
      CHECK(std::arg(h) <= 0.0);
      CHECK(std::arg(h) > -c::pi / 2.0);
    }
  }
  SUBCASE("transparent-conductor band is effectively metallic") {
    // Published ITO-like films: 3.3e4 .. 4.2e5 S/m.
    for (double sigma : {3.3e4, 1e5, 4.2e5}) {
      const phasor h = tco_transfer(model_for_width(30e-6, sigma), kOmega);
      CHECK(std::abs(1.0 - h) < 1e-3);
    }
  }
}

TEST_CASE("crossover scales with hole area and film thickness") {
  TcoModel small = model_for_width(30e-6, 1.0);
  TcoModel big = model_for_width(60e-6, 1.0);
  // Four times the area, four times the capacitance, four times sigma*.
  CHECK(tco_crossover_sigma(big, kOmega) ==
        doctest::Approx(4.0 * tco_crossover_sigma(small, kOmega)).epsilon(1e-12));

  TcoModel thick = small;
  thick.thickness = 2.0 * small.thickness;
  CHECK(tco_crossover_sigma(thick, kOmega) ==
        doctest::Approx(0.5 * tco_crossover_sigma(small, kOmega)).epsilon(1e-12));
}

TEST_CASE("model built from an aperture uses clipped area and layout metadata") {
  LayoutMetadata meta;
  meta.ground_gap = 4e-6;
  meta.cladding_epsilon_r = 2.0;
  Aperture a = Aperture::square(0.0, 0.0, 30e-6, TcoCoating{500.0, 80e-9});
  a.patch.y_max = a.patch.y_min + 10e-6;  // clipped: 10 x 30 um
  const TcoModel m = TcoModel::for_aperture(a, meta);
  CHECK(m.sigma == doctest::Approx(500.0));
  CHECK(m.thickness == doctest::Approx(80e-9));
  CHECK(m.patch_area == doctest::Approx(10e-6 * 30e-6));
  CHECK(m.ground_gap == doctest::Approx(4e-6));
  CHECK(m.epsilon_r == doctest::Approx(2.0));
}

TEST_CASE("coated hole drive term") {
  const TcoModel m = model_for_width(30e-6, 20.8288);
  const phasor h = tco_transfer(m, kOmega);
  const phasor d = coated_hole_drive(m, kOmega, phasor{100.0, 0.0});
  // The fill rides the electrode drive filtered by the RC divider.
  CHECK(std::abs(d - h * 100.0) < 1e-12 * std::abs(d));
  // Near the crossover the fill carries 1/sqrt(2) of the drive, lagging 45 deg.
  CHECK(std::abs(d) == doctest::Approx(100.0 / std::sqrt(2.0)).epsilon(1e-4));
  CHECK(std::arg(d) == doctest::Approx(-c::pi / 4.0).epsilon(1e-4));
}

}  // TEST_SUITE
