// surftrap: surface-electrode ion trap field studies from the command line.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "surftrap/analysis.hpp"
#include "surftrap/config.hpp"
#include "surftrap/constants.hpp"
#include "surftrap/photonics.hpp"
#include "surftrap/rfdynamics.hpp"
#include "surftrap/runner.hpp"

namespace {

using namespace surftrap;
using constants::um;

constexpr double kDegPerRad = 180.0 / constants::pi;

// "py,pz,wa" or "py,pz,wa,sigma" (um and S/m).
ApertureSpec parse_aperture_arg(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() != 3 && v.size() != 4)
    throw CLI::ValidationError("--aperture", "expected py,pz,wa[,sigma] in um (sigma S/m)");
  ApertureSpec a{v[0] * um, v[1] * um, v[2] * um, std::nullopt};
  if (v.size() == 4) a.coating = TcoCoating{v[3], 50e-9};
  return a;
}

struct SceneArgs {
  std::vector<std::string> apertures;
  std::vector<std::string> axes;
  double rf_voltage = 100.0;
  double rf_mhz = 16.0;
};

void add_scene_options(CLI::App* cmd, SceneArgs& s) {
  cmd->add_option("--aperture", s.apertures,
                  "aperture py,pz,wa[,sigma] (um, S/m); repeatable");
  cmd->add_option("--symmetrize", s.axes, "mirror apertures about an axis (z or y)");
  cmd->add_option("--rf-voltage", s.rf_voltage, "RF rail amplitude, V [100]");
  cmd->add_option("--rf-mhz", s.rf_mhz, "RF drive frequency, MHz [16]");
}

struct Scene {
  TrapLayout layout;
  Drive drive;
};

Scene build_scene(const SceneArgs& s) {
  Scene sc{build_reference_layout(),
           build_reference_drive(s.rf_voltage, constants::two_pi * s.rf_mhz * 1e6)};
  for (const auto& spec : s.apertures) {
    const ApertureSpec a = parse_aperture_arg(spec);
    add_aperture(sc.layout, Aperture::square(a.p_y, a.p_z, a.w_a, a.coating));
  }
  std::vector<Axis> axes;
  for (const auto& ax : s.axes) {
    if (ax == "z") axes.push_back(Axis::z);
    else if (ax == "y") axes.push_back(Axis::y);
    else throw CLI::ValidationError("--symmetrize", "axis must be z or y");
  }
  if (!axes.empty()) sc.layout = symmetrize(sc.layout, axes);
  sc.layout.validate();
  return sc;
}

int run_and_report(const Experiment& e, const RunOptions& opt) {
  const RunResult res = run_experiment(e, opt);
  if (!res.csv_path.empty()) std::cout << "wrote " << res.csv_path.string() << "\n";
  if (!res.json_path.empty()) std::cout << "wrote " << res.json_path.string() << "\n";
  for (const auto& p : res.scan_paths) std::cout << "wrote " << p.string() << "\n";
  if (!res.failures.empty()) {
    std::cerr << "numerical failure at " << res.failures.size() << " sweep value(s):\n";
    for (const auto& f : res.failures) std::cerr << "  " << f << "\n";
  }
  return res.exit_code;
}

void add_run_options(CLI::App* cmd, RunOptions& opt, std::string& format) {
  cmd->add_option("--out-dir", opt.out_dir, "output directory [.]");
  cmd->add_option("--workers", opt.workers,
                  "worker threads (0: SURFTRAP_WORKERS env or hardware)");
  cmd->add_option("--format", format, "records format: csv or json [csv]")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--resolution", opt.resolution,
                  "scan/search resolution multiplier [1.0]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surface-electrode ion trap studies with photonic apertures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", code_version());

  // run
  std::string config_path;
  RunOptions run_opt;
  std::string run_format = "csv";
  CLI::App* run = app.add_subcommand("run", "run a sweep described by a YAML config");
  run->add_option("config", config_path, "config file")->required();
  add_run_options(run, run_opt, run_format);

  // preset
  std::string preset_name;
  bool preset_list = false, preset_show = false;
  RunOptions preset_opt;
  std::string preset_format = "csv";
  CLI::App* preset = app.add_subcommand("preset", "run a built-in experiment");
  preset->add_option("name", preset_name, "preset name (see --list)");
  preset->add_flag("--list", preset_list, "list presets and exit");
  preset->add_flag("--show", preset_show, "print the preset as a YAML config and exit");
  add_run_options(preset, preset_opt, preset_format);

  // null
  SceneArgs null_scene;
  double null_z_um = 0.0;
  CLI::App* nul = app.add_subcommand("null", "locate the radial RF null");
  add_scene_options(nul, null_scene);
  nul->add_option("--z", null_z_um, "axial position, um [0]");

  // scan
  SceneArgs scan_scene;
  double scan_zmin = -1000.0, scan_zmax = 1000.0, scan_height = -1.0;
  int scan_samples = 2001;
  std::string scan_out;
  CLI::App* scan = app.add_subcommand("scan", "axial field scan (CSV)");
  add_scene_options(scan, scan_scene);
  scan->add_option("--z-min", scan_zmin, "um [-1000]");
  scan->add_option("--z-max", scan_zmax, "um [1000]");
  scan->add_option("--samples", scan_samples, "[2001]");
  scan->add_option("--height", scan_height, "scan height, um (default: null height)");
  scan->add_option("--out", scan_out, "output file (default: stdout)");

  // metrics
  SceneArgs met_scene;
  CLI::App* met = app.add_subcommand("metrics", "null, secular modes, depth, stability");
  add_scene_options(met, met_scene);

  // grating
  std::string gr_preset;
  double gr_neff = 0.0, gr_wl_nm = 0.0, gr_theta_deg = 0.0;
  double gr_height_um = 101.98, gr_tol_nm = 1.0;
  int gr_order = 1;
  CLI::App* gr = app.add_subcommand("grating", "grating coupler design table");
  gr->add_option("--preset", gr_preset, "stack preset (si3n4-760, al2o3-370, si3n4-760-cutoff)");
  gr->add_option("--neff", gr_neff, "effective index (overrides preset)");
  gr->add_option("--wavelength-nm", gr_wl_nm, "vacuum wavelength, nm");
  gr->add_option("--order", gr_order, "diffraction order [1]");
  gr->add_option("--theta-deg", gr_theta_deg, "target emission angle, deg [0]");
  gr->add_option("--height-um", gr_height_um, "ion height for beam-offset figure, um");
  gr->add_option("--tolerance-nm", gr_tol_nm, "period fabrication tolerance, nm [1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      run_opt.json_records = run_format == "json";
      return run_and_report(load_config(config_path), run_opt);
    }

    if (*preset) {
      if (preset_list || preset_name.empty()) {
        for (const auto& n : preset_names()) std::cout << n << "\n";
        return 0;
      }
      const Experiment e = make_preset(preset_name);
      if (preset_show) {
        std::cout << to_yaml(e);
        return 0;
      }
      preset_opt.json_records = preset_format == "json";
      return run_and_report(e, preset_opt);
    }

    if (*nul) {
      const Scene sc = build_scene(null_scene);
      const NullResult r = find_radial_null(sc.layout, sc.drive, null_z_um * um);
      std::printf("null: x = %.6f um, y = %.6f um\n", r.x / um, r.y / um);
      std::printf("residual |E| = %.6g V/m after %d iterations (last step %.3g m)\n",
                  r.residual, r.iterations, r.final_step);
      return 0;
    }

    if (*scan) {
      const Scene sc = build_scene(scan_scene);
      const double height =
          scan_height > 0 ? scan_height * um : std::numeric_limits<double>::quiet_NaN();
      const AxialScan s = axial_scan(sc.layout, sc.drive, scan_zmin * um,
                                     scan_zmax * um, scan_samples, height);
      const std::string csv = scan_to_csv(s);
      if (scan_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream f(scan_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + scan_out);
        f << csv;
        std::cout << "wrote " << scan_out << " (height " << s.height / um << " um)\n";
      }
      return 0;
    }

    if (*met) {
      const Scene sc = build_scene(met_scene);
      const IonSpecies ion = IonSpecies::yb172();
      const NullResult null = find_radial_null(sc.layout, sc.drive);
      const SecularModes modes =
          secular_frequencies(sc.layout, sc.drive, ion, {null.x, null.y, 0.0});
      const TrapDepth depth = trap_depth(sc.layout, sc.drive, ion);
      const MathieuQ q = mathieu_q(modes.frequency[1], sc.drive.rf_omega);
      std::printf("null:      x = %.4f um, y = %.4f um (residual %.3g V/m)\n",
                  null.x / um, null.y / um, null.residual);
      std::printf("secular:   axial %.4f kHz, radial %.4f / %.4f MHz\n",
                  modes.frequency[0] / 1e3, modes.frequency[1] / 1e6,
                  modes.frequency[2] / 1e6);
      std::printf("depth:     %.2f meV, escape at x = %.2f um, y = %.2f um\n",
                  depth.depth_ev * 1e3, depth.escape.x / um, depth.escape.y / um);
      std::printf("stability: q = %.4f (%s)\n", q.q, q.stable ? "stable" : "unstable");
      return 0;
    }

    if (*gr) {
      double neff = gr_neff, wl = gr_wl_nm * 1e-9;
      if (!gr_preset.empty()) {
        const GratingPreset* p = find_grating_preset(gr_preset);
        if (!p) throw std::invalid_argument("unknown grating preset '" + gr_preset + "'");
        if (neff <= 0) neff = p->n_eff;
        if (wl <= 0) wl = p->wavelength;
      }
      if (neff <= 0 || wl <= 0)
        throw std::invalid_argument("grating needs --preset or --neff and --wavelength-nm");
      const GratingDesign d =
          design_grating(neff, wl, gr_order, gr_theta_deg / kDegPerRad,
                         gr_height_um * um, gr_tol_nm * 1e-9);
      std::printf("n_eff = %.4f, lambda = %.1f nm, order %d, theta = %.2f deg\n",
                  d.n_eff, d.wavelength * 1e9, d.order, d.theta * kDegPerRad);
      std::printf("period:          %.3f nm (feature %.3f nm)\n", d.period * 1e9,
                  d.feature * 1e9);
      std::printf("sensitivity:     %.4f deg/nm\n", d.sensitivity * kDegPerRad * 1e-9);
      std::printf("orders:          ");
      for (const auto& o : d.orders)
        std::printf("m=%d at %.2f deg  ", o.order, o.angle * kDegPerRad);
      std::printf("\n");
      std::printf("second order propagates above theta1 = %.3f deg\n",
                  second_order_onset(d.n_eff) * kDegPerRad);
      std::printf("period tol +/- %.2f nm -> angle error %.4f deg, beam offset %.3f um "
                  "at h = %.1f um\n",
                  d.period_tolerance * 1e9, d.angle_error * kDegPerRad,
                  d.beam_offset / um, gr_height_um);
      return 0;
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const layout_error& e) {
    std::cerr << "layout error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
