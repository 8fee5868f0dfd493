#include <doctest.h>

#include <cmath>
#include <string>
#include <variant>

#include <surftrap/config.hpp>
#include <surftrap/errors.hpp>
#include <surftrap/runner.hpp>

using namespace surftrap;
namespace c = surftrap::constants;

namespace {

config_error capture(const std::string& yaml) {
  try {
    (void)parse_config(yaml, "test.yaml");
  } catch (const config_error& e) {
    return e;
  }
  FAIL("expected config_error");
  return config_error("", 0, 0, "unreachable");
}

double val(const SweepValue& v) { return std::get<double>(v); }

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config uses documented defaults") {
  const Experiment e = parse_config("layout: reference\n", "min.yaml");
  CHECK(e.name == "run");
  CHECK(e.layout.electrodes.size() == 14);
  CHECK(e.drive.rf_omega == doctest::Approx(c::two_pi * 16e6));
  const Excitation* rf = e.drive.find("rf_p");
  REQUIRE(rf != nullptr);
  CHECK(rf->amplitude == doctest::Approx(100.0));
  CHECK(rf->kind == DriveKind::rf);
  const Excitation* dc = e.drive.find("cdc_n");
  REQUIRE(dc != nullptr);
  CHECK(dc->amplitude == 0.0);
  CHECK(e.ion.mass == doctest::Approx(172.0 * c::atomic_mass_unit));
  CHECK(e.apertures.empty());
  CHECK(e.variable == SweepVariable::symmetry);
  REQUIRE(e.values.size() == 1);
  CHECK(std::get<std::string>(e.values[0]) == kSymmetryReference);
  REQUIRE(e.analyses.size() == 2);
  CHECK(e.analyses[0] == AnalysisKind::null_point);
  CHECK(e.analyses[1] == AnalysisKind::displacement);
  CHECK(e.scan.samples == 2001);
  CHECK(e.csv_name.empty());
}

TEST_CASE("defaulted sweep with an aperture becomes a single-hole run") {
  const Experiment e = parse_config(
      "layout: reference\napertures:\n  - {p_y: 126.8, w_a: 30}\n", "a.yaml");
  CHECK(e.variable == SweepVariable::symmetry);
  REQUIRE(e.values.size() == 1);
  CHECK(std::get<std::string>(e.values[0]) == kSymmetrySingle);
  REQUIRE(e.apertures.size() == 1);
  CHECK(e.apertures[0].p_y == doctest::Approx(126.8e-6));
  CHECK(e.apertures[0].w_a == doctest::Approx(30e-6));
  CHECK(!e.apertures[0].coating.has_value());
}

TEST_CASE("full custom config") {
  const std::string y = R"(name: custom
layout:
  sim_region: {y_min: -500, y_max: 500, z_min: -500, z_max: 500}
  metadata: {thickness_um: 5, ground_gap_um: 2, epsilon_r: 3.0}
  electrodes:
    - {id: rail_p, kind: rf, y_min: 50, y_max: 150, z_min: -500, z_max: 500}
    - {id: rail_n, kind: rf, y_min: -150, y_max: -50, z_min: -500, z_max: 500}
    - {id: mid, kind: center-dc, y_min: -45, y_max: 45, z_min: -500, z_max: 500}
drive:
  rf_frequency_mhz: 20
  excitations:
    rail_p: {amplitude: 80, kind: rf}
    rail_n: {amplitude: 80, phase_deg: 10, kind: rf}
    mid: {amplitude: 1.5}
ion: {mass_amu: 40, charge_e: 1}
apertures:
  - {p_y: 100, p_z: 0, w_a: 20, coating: {sigma: 50, thickness_nm: 40}}
symmetrize: [z]
sweep:
  variable: sigma
  log_range: {start_decade: 0, stop_decade: 2, per_decade: 2}
analyses: [null-point, displacement]
scan: {z_min_um: -200, z_max_um: 200, samples: 401}
output: {csv: out.csv, json: out.json}
)";
  const Experiment e = parse_config(y, "full.yaml");
  CHECK(e.name == "custom");
  CHECK(e.layout.electrodes.size() == 3);
  CHECK(e.layout.metadata.ground_gap == doctest::Approx(2e-6));
  CHECK(e.layout.metadata.cladding_epsilon_r == doctest::Approx(3.0));
  CHECK(e.drive.rf_omega == doctest::Approx(c::two_pi * 20e6));
  CHECK(e.drive.find("rail_n")->phase == doctest::Approx(10.0 * c::pi / 180.0));
  CHECK(e.drive.find("mid")->kind == DriveKind::dc);
  CHECK(e.drive.find("mid")->amplitude == doctest::Approx(1.5));
  CHECK(e.ion.mass == doctest::Approx(40.0 * c::atomic_mass_unit));
  REQUIRE(e.apertures.size() == 1);
  REQUIRE(e.apertures[0].coating.has_value());
  CHECK(e.apertures[0].coating->sigma == doctest::Approx(50.0));
  CHECK(e.apertures[0].coating->thickness == doctest::Approx(40e-9));
  REQUIRE(e.symmetrize_axes.size() == 1);
  CHECK(e.symmetrize_axes[0] == Axis::z);
  CHECK(e.variable == SweepVariable::sigma);
  REQUIRE(e.values.size() == 5);  // decades 0..2, 2 per decade
  CHECK(val(e.values[0]) == doctest::Approx(1.0));
  CHECK(val(e.values[1]) == doctest::Approx(std::sqrt(10.0)));
  CHECK(val(e.values[4]) == doctest::Approx(100.0));
  CHECK(e.scan.samples == 401);
  CHECK(e.csv_name == "out.csv");
  CHECK(e.json_name == "out.json");
}

TEST_CASE("sweep forms") {
  SUBCASE("explicit values are scaled to metres") {
    const Experiment e = parse_config(
        "apertures: [{p_y: 126.8, w_a: 30}]\n"
        "sweep: {variable: p_z, values: [0, 25.5, 100]}\n",
        "v.yaml");
    REQUIRE(e.values.size() == 3);
    CHECK(val(e.values[1]) == doctest::Approx(25.5e-6));
  }
  SUBCASE("range with step includes the endpoint") {
    const Experiment e = parse_config(
        "apertures: [{p_y: 126.8, w_a: 30}]\n"
        "sweep: {variable: p_z, range: {start: 0, stop: 100, step: 25}}\n",
        "r.yaml");
    REQUIRE(e.values.size() == 5);
    CHECK(val(e.values.back()) == doctest::Approx(100e-6));
  }
  SUBCASE("range with count") {
    const Experiment e = parse_config(
        "apertures: [{p_y: 126.8, w_a: 30}]\n"
        "sweep: {variable: w_a, range: {start: 10, stop: 100, count: 4}}\n",
        "c.yaml");
    REQUIRE(e.values.size() == 4);
    CHECK(val(e.values[1]) == doctest::Approx(40e-6));
  }
  SUBCASE("log range covers the documented conductivity ladder") {
    const Experiment e = parse_config(
        "apertures: [{p_y: 126.8, w_a: 30, coating: {sigma: 100}}]\n"
        "sweep:\n"
        "  variable: sigma\n"
        "  log_range: {start_decade: -3, stop_decade: 8, per_decade: 12}\n",
        "lg.yaml");
    REQUIRE(e.values.size() == 133);
    CHECK(val(e.values.front()) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(val(e.values.back()) == doctest::Approx(1e8).epsilon(1e-12));
  }
  SUBCASE("label sweeps") {
    const Experiment e = parse_config(
        "apertures: [{p_y: 126.8, w_a: 30}]\n"
        "sweep: {variable: electrode, values: [rf, center-dc, outer-dc]}\n",
        "el.yaml");
    CHECK(e.variable == SweepVariable::electrode);
    CHECK(std::get<std::string>(e.values[2]) == "outer-dc");
  }
}

TEST_CASE("errors carry file, line, and column") {
  SUBCASE("negative aperture width") {
    const config_error e = capture(
        "layout: reference\n"   // 1
        "apertures:\n"          // 2
        "  - p_y: 126.8\n"      // 3
        "    w_a: -5\n");       // 4
    CHECK(e.line() == 4);
    CHECK(e.column() > 1);
    CHECK(std::string(e.what()).find("test.yaml:4:") != std::string::npos);
    CHECK(std::string(e.what()).find("w_a") != std::string::npos);
  }
  SUBCASE("unknown top-level key") {
    const config_error e = capture("name: x\nbogus: 3\n");
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  SUBCASE("excitation for an unknown electrode") {
    const config_error e = capture(
        "layout: reference\n"                          // 1
        "drive:\n"                                     // 2
        "  excitations:\n"                             // 3
        "    ghost: {amplitude: 1, kind: rf}\n");      // 4
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("ghost") != std::string::npos);
  }
  SUBCASE("aperture entirely in grounded area") {
    const config_error e = capture(
        "layout: reference\n"                          // 1
        "apertures:\n"                                 // 2
        "  - {p_y: 0, p_z: 0, w_a: 4}\n");             // 3
    CHECK(e.line() == 3);
  }
  SUBCASE("overlapping electrodes flag the offending entry") {
    const config_error e = capture(
        "layout:\n"                                                            // 1
        "  sim_region: {y_min: -500, y_max: 500, z_min: -500, z_max: 500}\n"   // 2
        "  electrodes:\n"                                                      // 3
        "    - {id: a, kind: rf, y_min: 0, y_max: 100, z_min: -100, z_max: 100}\n"
        "    - {id: b, kind: rf, y_min: 50, y_max: 150, z_min: -100, z_max: 100}\n");
    CHECK(e.line() == 5);
  }
  SUBCASE("malformed yaml") {
    const config_error e = capture("a: [1, 2\n");
    CHECK(e.line() >= 1);
  }
  SUBCASE("bad electrode kind") {
    const config_error e = capture(
        "layout:\n"
        "  sim_region: {y_min: -500, y_max: 500, z_min: -500, z_max: 500}\n"
        "  electrodes:\n"
        "    - {id: a, kind: magnetic, y_min: 0, y_max: 100, z_min: -100, z_max: 100}\n");
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("magnetic") != std::string::npos);
  }
}

TEST_CASE("semantic validation") {
  // Sigma sweep over an uncoated hole makes no sense.
  CHECK_THROWS_AS((void)parse_config("layout: reference\n"
                                     "apertures: [{p_y: 126.8, w_a: 30}]\n"
                                     "sweep: {variable: sigma, values: [10]}\n",
                                     "s.yaml"),
                  config_error);
  // No driven RF electrode.
  CHECK_THROWS_AS((void)parse_config("layout: reference\ndrive: {rf_voltage: 0}\n",
                                     "z.yaml"),
                  config_error);
  // Numeric sweep without an aperture.
  CHECK_THROWS_AS((void)parse_config("layout: reference\n"
                                     "sweep: {variable: w_a, values: [30]}\n",
                                     "w.yaml"),
                  config_error);
  // Bad scan window.
  CHECK_THROWS_AS((void)parse_config("layout: reference\n"
                                     "scan: {z_min_um: 10, z_max_um: -10}\n",
                                     "sc.yaml"),
                  config_error);
  // Unknown symmetry label.
  CHECK_THROWS_AS((void)parse_config("layout: reference\n"
                                     "apertures: [{p_y: 126.8, w_a: 30}]\n"
                                     "sweep: {variable: symmetry, values: [sideways]}\n",
                                     "sy.yaml"),
                  config_error);
}

TEST_CASE("load_config reports unreadable files") {
  CHECK_THROWS_AS((void)load_config("/nonexistent/dir/conf.yaml"), config_error);
}

TEST_CASE("every preset round-trips through yaml") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const Experiment e = make_preset(name);
    const std::string y = to_yaml(e);
    const Experiment back = parse_config(y, name + ".yaml");

    CHECK(back.name == e.name);
    CHECK(back.variable == e.variable);
    REQUIRE(back.values.size() == e.values.size());
    for (size_t i = 0; i < e.values.size(); ++i) {
      if (std::holds_alternative<double>(e.values[i]))
        CHECK(val(back.values[i]) ==
              doctest::Approx(val(e.values[i])).epsilon(1e-12));
      else
        CHECK(std::get<std::string>(back.values[i]) ==
              std::get<std::string>(e.values[i]));
    }
    REQUIRE(back.analyses.size() == e.analyses.size());
    for (size_t i = 0; i < e.analyses.size(); ++i)
      CHECK(back.analyses[i] == e.analyses[i]);
    REQUIRE(back.apertures.size() == e.apertures.size());
    for (size_t i = 0; i < e.apertures.size(); ++i) {
      CHECK(back.apertures[i].p_y ==
            doctest::Approx(e.apertures[i].p_y).epsilon(1e-12));
      CHECK(back.apertures[i].w_a ==
            doctest::Approx(e.apertures[i].w_a).epsilon(1e-12));
      CHECK(back.apertures[i].coating.has_value() ==
            e.apertures[i].coating.has_value());
    }
    CHECK(back.drive.rf_omega == doctest::Approx(e.drive.rf_omega));
    CHECK(back.layout.electrodes.size() == e.layout.electrodes.size());
    CHECK(back.scan.samples == e.scan.samples);
    CHECK(back.csv_name == e.csv_name);
  }
}

TEST_CASE("enum names") {
  CHECK(std::string(to_string(SweepVariable::p_y)) == "p_y");
  CHECK(std::string(to_string(SweepVariable::sigma)) == "sigma");
  CHECK(std::string(to_string(AnalysisKind::axial_scan)) == "axial-scan");
  CHECK(std::string(to_string(AnalysisKind::trap_metrics)) == "metrics");
}

}  // TEST_SUITE
