#include "surftrap/runner.hpp"

#include <json.hpp>

#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "surftrap/constants.hpp"
#include "surftrap/errors.hpp"

#ifndef SURFTRAP_VERSION
#define SURFTRAP_VERSION "dev"
#endif

namespace surftrap {

namespace {

using constants::um;
using ordered_json = nlohmann::ordered_json;

std::string fmt9(double v) {
  if (std::isnan(v)) return {};
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Numeric sweep values are stored in SI; display geometric ones in um.
double display_scale(SweepVariable v) {
  return v == SweepVariable::sigma ? 1.0 : 1.0 / um;
}

std::string display_value(const Experiment& e, const SweepValue& v) {
  if (std::holds_alternative<double>(v))
    return fmt9(std::get<double>(v) * display_scale(e.variable));
  return std::get<std::string>(v);
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
            c == '.')
               ? c
               : '-';
  return out.empty() ? std::string("run") : out;
}

// Electrode an `electrode` sweep recenters the aperture in: prefer the +y
// side, then the segment nearest the aperture's p_z.
const Electrode* electrode_for_kind(const TrapLayout& t, ElectrodeKind kind, double p_z) {
  const Electrode* best = nullptr;
  auto better = [&](const Electrode& e) {
    if (!best) return true;
    const bool ep = e.region.center_y() > 0.0, bp = best->region.center_y() > 0.0;
    if (ep != bp) return ep;
    const double ez = std::abs(e.region.center_z() - p_z);
    const double bz = std::abs(best->region.center_z() - p_z);
    if (ez != bz) return ez < bz;
    return e.region.center_y() < best->region.center_y();
  };
  for (const auto& e : t.electrodes)
    if (e.kind == kind && better(e)) best = &e;
  return best;
}

ElectrodeKind kind_from_label(const std::string& s) {
  if (s == "rf") return ElectrodeKind::rf;
  if (s == "center-dc") return ElectrodeKind::center_dc;
  return ElectrodeKind::outer_dc;
}

// Aperture list and symmetrize axes after applying one sweep value.
struct SweptSetup {
  std::vector<ApertureSpec> apertures;
  std::vector<Axis> axes;
};

SweptSetup apply_value(const Experiment& e, const SweepValue& value) {
  SweptSetup s{e.apertures, e.symmetrize_axes};
  switch (e.variable) {
    case SweepVariable::p_y:
      s.apertures.at(0).p_y = std::get<double>(value);
      break;
    case SweepVariable::p_z:
      s.apertures.at(0).p_z = std::get<double>(value);
      break;
    case SweepVariable::w_a:
      s.apertures.at(0).w_a = std::get<double>(value);
      break;
    case SweepVariable::sigma:
      s.apertures.at(0).coating->sigma = std::get<double>(value);
      break;
    case SweepVariable::electrode: {
      const Electrode* host =
          electrode_for_kind(e.layout, kind_from_label(std::get<std::string>(value)),
                             s.apertures.at(0).p_z);
      if (!host)
        throw layout_error("electrode sweep: layout has no electrode of kind '" +
                           std::get<std::string>(value) + "'");
      s.apertures.at(0).p_y = host->region.center_y();
      break;
    }
    case SweepVariable::symmetry: {
      const std::string& label = std::get<std::string>(value);
      if (label == kSymmetryReference) s.apertures.clear();
      else if (label == kSymmetryZMirrored) s.axes = {Axis::z};
      else if (label == kSymmetryFullyMirrored) s.axes = {Axis::z, Axis::y};
      // kSymmetrySingle: apertures as listed, no mirroring
      break;
    }
  }
  return s;
}

}  // namespace

TrapLayout layout_for_value(const Experiment& e, const SweepValue& value) {
  const SweptSetup s = apply_value(e, value);
  TrapLayout layout = e.layout;
  for (const auto& a : s.apertures)
    add_aperture(layout, Aperture::square(a.p_y, a.p_z, a.w_a, a.coating));
  if (!s.axes.empty()) layout = symmetrize(layout, s.axes);
  layout.validate();
  return layout;
}

double aperture_py_for_value(const Experiment& e, const SweepValue& value) {
  const SweptSetup s = apply_value(e, value);
  if (s.apertures.empty()) return std::numeric_limits<double>::quiet_NaN();
  return s.apertures.front().p_y;
}

int resolve_worker_count(const RunOptions& opt, int record_count) {
  int w = opt.workers;
  if (w <= 0) {
    if (const char* env = std::getenv("SURFTRAP_WORKERS")) {
      const int v = std::atoi(env);
      if (v > 0) w = v;
    }
  }
  if (w <= 0) w = int(std::thread::hardware_concurrency());
  if (w <= 0) w = 1;
  return std::max(1, std::min(w, std::max(1, record_count)));
}

std::string code_version() { return SURFTRAP_VERSION; }

namespace {

struct RunCtx {
  int scan_samples = 2001;
  double depth_grid = 2e-6;
  double ref_height = std::numeric_limits<double>::quiet_NaN();
};

ResultRecord compute_record(const Experiment& e, const RunCtx& ctx, int index) {
  ResultRecord r;
  r.index = index;
  r.value = e.values[size_t(index)];

  TrapLayout layout;
  try {
    layout = layout_for_value(e, r.value);
    const double py = aperture_py_for_value(e, r.value);
    if (!std::isnan(py) && !std::isnan(ctx.ref_height))
      r.theta = std::atan(py / ctx.ref_height);
  } catch (const std::exception& ex) {
    r.failed = true;
    r.notes.push_back(std::string("layout: ") + ex.what());
    return r;
  }

  auto has = [&](AnalysisKind k) {
    for (AnalysisKind a : e.analyses)
      if (a == k) return true;
    return false;
  };
  auto run_step = [&](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& ex) {
      r.failed = true;
      r.notes.push_back(std::string(what) + ": " + ex.what());
    }
  };

  const Point3 guess{std::isnan(ctx.ref_height) ? 100e-6 : ctx.ref_height, 0.0, 0.0};
  if (has(AnalysisKind::null_point))
    run_step("null-point", [&] {
      r.null_point = find_radial_null(layout, e.drive, 0.0, guess);
    });
  if (has(AnalysisKind::displacement))
    run_step("displacement", [&] { r.disp = displacement(layout, e.drive, 0.0); });

  std::optional<AxialScan> scan;
  if (has(AnalysisKind::axial_scan) || has(AnalysisKind::peak_metrics))
    run_step("axial-scan", [&] {
      scan = axial_scan(layout, e.drive, e.scan.z_min, e.scan.z_max, ctx.scan_samples);
      if (has(AnalysisKind::axial_scan)) r.scan = scan;
    });
  if (has(AnalysisKind::peak_metrics) && scan) {
    // A component without a usable peak is a property of the profile, not a
    // failure of the sweep: note it and move on.
    auto component = [&](FieldComponent c, std::optional<PeakMetrics>& slot) {
      try {
        slot = peak_metrics(*scan, c);
      } catch (const numeric_error& ex) {
        r.notes.push_back(std::string(to_string(c)) + ": " + ex.what());
      }
    };
    component(FieldComponent::ex, r.ex);
    component(FieldComponent::ey, r.ey);
    component(FieldComponent::ez, r.ez);
  }
  if (has(AnalysisKind::trap_metrics))
    run_step("metrics", [&] {
      const NullResult null =
          r.null_point ? *r.null_point : find_radial_null(layout, e.drive, 0.0, guess);
      r.modes = secular_frequencies(layout, e.drive, e.ion,
                                    {null.x, null.y, 0.0});
      r.q = mathieu_q(r.modes->frequency[1], e.drive.rf_omega);
      r.depth = trap_depth(layout, e.drive, e.ion, ctx.depth_grid);
    });
  return r;
}

}  // namespace

std::string records_to_csv(const Experiment& e, const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  out << "index,sweep_variable,sweep_value,theta_deg,"
         "null_x_um,null_y_um,null_residual_V_per_m,"
         "dx_um,dy_um,residual_at_ref_V_per_m,micromotion_nm,";
  for (const char* c : {"ex", "ey", "ez"})
    out << c << "_amp_z0_V_per_m," << c << "_peak_V_per_m," << c << "_peak_z_um,"
        << c << "_fwhm_um," << c << "_fwhm_grad_V_per_mm2," << c
        << "_disp_grad_V_per_mm2,";
  out << "nu_axial_MHz,nu_radial1_MHz,nu_radial2_MHz,depth_meV,mathieu_q,"
         "mathieu_stable,notes\n";

  for (const auto& r : records) {
    out << r.index << ',' << to_string(e.variable) << ','
        << csv_escape(display_value(e, r.value)) << ','
        << fmt9(r.theta * 180.0 / constants::pi) << ',';
    if (r.null_point)
      out << fmt9(r.null_point->x / um) << ',' << fmt9(r.null_point->y / um) << ','
          << fmt9(r.null_point->residual) << ',';
    else
      out << ",,,";
    if (r.disp) {
      const Micromotion mm =
          micromotion(r.disp->residual_at_reference, e.ion, e.drive.rf_omega);
      out << fmt9(r.disp->dx / um) << ',' << fmt9(r.disp->dy / um) << ','
          << fmt9(r.disp->residual_at_reference) << ',' << fmt9(mm.amplitude * 1e9)
          << ',';
    } else {
      out << ",,,,";
    }
    for (const auto* pm : {&r.ex, &r.ey, &r.ez}) {
      if (*pm)
        out << fmt9((*pm)->amplitude_z0) << ',' << fmt9((*pm)->peak_amplitude) << ','
            << fmt9((*pm)->peak_z / um) << ',' << fmt9((*pm)->fwhm / um) << ','
            << fmt9((*pm)->fwhm_gradient * 1e-6) << ','
            << fmt9((*pm)->dispersive_gradient * 1e-6) << ',';
      else
        out << ",,,,,,";
    }
    if (r.modes)
      out << fmt9(r.modes->frequency[0] / 1e6) << ',' << fmt9(r.modes->frequency[1] / 1e6)
          << ',' << fmt9(r.modes->frequency[2] / 1e6) << ',';
    else
      out << ",,,";
    out << (r.depth ? fmt9(r.depth->depth_ev * 1e3) : std::string()) << ',';
    if (r.q)
      out << fmt9(r.q->q) << ',' << (r.q->stable ? '1' : '0') << ',';
    else
      out << ",,";
    std::string notes;
    for (const auto& n : r.notes) {
      if (!notes.empty()) notes += "; ";
      notes += n;
    }
    out << csv_escape(notes) << '\n';
  }
  return out.str();
}

std::string scan_to_csv(const AxialScan& scan) {
  std::ostringstream out;
  out << "z_um,ex_re_V_per_m,ex_im_V_per_m,ex_abs_V_per_m,"
         "ey_re_V_per_m,ey_im_V_per_m,ey_abs_V_per_m,"
         "ez_re_V_per_m,ez_im_V_per_m,ez_abs_V_per_m\n";
  for (size_t i = 0; i < scan.z.size(); ++i) {
    const PhasorField3& f = scan.field[i];
    out << fmt9(scan.z[i] / um);
    for (const phasor& c : {f.x, f.y, f.z})
      out << ',' << fmt9(c.real()) << ',' << fmt9(c.imag()) << ',' << fmt9(std::abs(c));
    out << '\n';
  }
  return out.str();
}

namespace {

ordered_json record_to_json(const Experiment& e, const ResultRecord& r) {
  auto opt_num = [](bool present, double v) {
    return present ? ordered_json(v) : ordered_json(nullptr);
  };
  ordered_json j;
  j["index"] = r.index;
  if (std::holds_alternative<double>(r.value))
    j["value"] = std::get<double>(r.value) * display_scale(e.variable);
  else
    j["value"] = std::get<std::string>(r.value);
  j["theta_deg"] = opt_num(!std::isnan(r.theta), r.theta * 180.0 / constants::pi);
  if (r.null_point) {
    j["null_point"] = {{"x_um", r.null_point->x / um},
                       {"y_um", r.null_point->y / um},
                       {"residual_V_per_m", r.null_point->residual},
                       {"iterations", r.null_point->iterations}};
  }
  if (r.disp) {
    const Micromotion mm =
        micromotion(r.disp->residual_at_reference, e.ion, e.drive.rf_omega);
    j["displacement"] = {{"dx_um", r.disp->dx / um},
                         {"dy_um", r.disp->dy / um},
                         {"residual_at_ref_V_per_m", r.disp->residual_at_reference},
                         {"micromotion_nm", mm.amplitude * 1e9},
                         {"fractional_shift", mm.fractional_shift}};
  }
  auto pm_json = [](const PeakMetrics& p) {
    return ordered_json{{"amp_z0_V_per_m", p.amplitude_z0},
                        {"peak_V_per_m", p.peak_amplitude},
                        {"peak_z_um", p.peak_z / um},
                        {"fwhm_um", p.fwhm / um},
                        {"fwhm_grad_V_per_mm2", p.fwhm_gradient * 1e-6},
                        {"disp_grad_V_per_mm2", p.dispersive_gradient * 1e-6}};
  };
  if (r.ex) j["ex"] = pm_json(*r.ex);
  if (r.ey) j["ey"] = pm_json(*r.ey);
  if (r.ez) j["ez"] = pm_json(*r.ez);
  if (r.modes)
    j["secular_MHz"] = {r.modes->frequency[0] / 1e6, r.modes->frequency[1] / 1e6,
                        r.modes->frequency[2] / 1e6};
  if (r.depth)
    j["depth"] = {{"depth_meV", r.depth->depth_ev * 1e3},
                  {"escape_x_um", r.depth->escape.x / um},
                  {"escape_y_um", r.depth->escape.y / um}};
  if (r.q) j["mathieu"] = {{"q", r.q->q}, {"stable", r.q->stable}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  if (r.failed) j["failed"] = true;
  return j;
}

}  // namespace

std::string run_manifest_json(const Experiment& e, const RunResult& result,
                              const RunOptions& opt, const std::string& timestamp) {
  ordered_json j;
  j["experiment"] = e.name;
  j["generated"] = timestamp;
  j["code_version"] = code_version();
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_yaml(e))));
  j["config_hash"] = hash;
  j["sweep"] = {{"variable", to_string(e.variable)},
                {"count", e.values.size()}};
  j["workers"] = resolve_worker_count(opt, int(e.values.size()));
  j["resolution"] = opt.resolution;
  {
    ordered_json a = ordered_json::array();
    for (AnalysisKind k : e.analyses) a.push_back(to_string(k));
    j["analyses"] = a;
  }
  j["units"] = {{"lengths", "um"},        {"fields", "V/m"},
                {"gradients", "V/mm^2"},  {"frequencies", "MHz"},
                {"depth", "meV"},         {"micromotion", "nm"},
                {"theta", "deg"},         {"sigma", "S/m"}};
  {
    ordered_json outputs;
    outputs["csv"] = result.csv_path.empty() ? ordered_json(nullptr)
                                             : ordered_json(result.csv_path.filename().string());
    ordered_json scans = ordered_json::array();
    for (const auto& p : result.scan_paths) scans.push_back(p.filename().string());
    outputs["scans"] = scans;
    j["outputs"] = outputs;
  }
  j["failures"] = result.failures;
  {
    ordered_json notes;
    for (const auto& r : result.records)
      if (!r.notes.empty()) notes[std::to_string(r.index)] = r.notes;
    j["record_notes"] = notes;
  }
  if (opt.json_records) {
    ordered_json recs = ordered_json::array();
    for (const auto& r : result.records) recs.push_back(record_to_json(e, r));
    j["records"] = recs;
  }
  return j.dump(2) + "\n";
}

RunResult run_experiment(const Experiment& e, const RunOptions& opt) {
  e.validate();
  const int n = int(e.values.size());

  RunCtx ctx;
  ctx.scan_samples =
      std::max(2, int(std::lround((e.scan.samples - 1) * opt.resolution)) + 1);
  ctx.depth_grid = std::clamp(2e-6 / std::max(0.1, opt.resolution), 0.2e-6, 10e-6);
  try {
    ctx.ref_height = find_radial_null(e.layout, e.drive, 0.0).x;
  } catch (const std::exception&) {
    // theta column and guesses degrade gracefully
  }

  RunResult result;
  result.records.resize(size_t(n));
  const int workers = resolve_worker_count(opt, n);

  // Records are claimed by index and written to their slot, so the output is
  // identical for any worker count.
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        result.records[size_t(i)] = compute_record(e, ctx, i);
      } catch (const std::exception& ex) {
        result.records[size_t(i)].index = i;
        result.records[size_t(i)].value = e.values[size_t(i)];
        result.records[size_t(i)].failed = true;
        result.records[size_t(i)].notes.push_back(std::string("record: ") + ex.what());
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (const auto& r : result.records)
    if (r.failed) {
      std::string what = display_value(e, r.value);
      for (const auto& note : r.notes) what += " | " + note;
      result.failures.push_back(what);
    }
  result.exit_code = result.failures.empty() ? 0 : 3;

  if (opt.write_files) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    const std::string stem = sanitize(
        !e.csv_name.empty()
            ? (e.csv_name.size() > 4 && e.csv_name.substr(e.csv_name.size() - 4) == ".csv"
                   ? e.csv_name.substr(0, e.csv_name.size() - 4)
                   : e.csv_name)
            : e.name);
    auto write = [&](const fs::path& p, const std::string& text) {
      std::ofstream f(p, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + p.string());
      f << text;
    };
    if (!opt.json_records) {
      result.csv_path = opt.out_dir / (stem + ".csv");
      write(result.csv_path, records_to_csv(e, result.records));
    }
    for (const auto& r : result.records)
      if (r.scan) {
        char suffix[32];
        std::snprintf(suffix, sizeof(suffix), "_scan_%03d.csv", r.index);
        const fs::path p = opt.out_dir / (stem + suffix);
        write(p, scan_to_csv(*r.scan));
        result.scan_paths.push_back(p);
      }
    const std::string json_name =
        !e.json_name.empty() ? sanitize(e.json_name) : stem + ".json";
    result.json_path = opt.out_dir / json_name;
    write(result.json_path, run_manifest_json(e, result, opt, timestamp_utc()));
  }
  return result;
}

}  // namespace surftrap
