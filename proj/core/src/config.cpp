#include "surftrap/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "surftrap/constants.hpp"

namespace surftrap {

namespace {

using constants::um;

struct Ctx {
  std::string file;
};

[[noreturn]] void fail(const Ctx& ctx, const YAML::Node& node, const std::string& msg) {
  const YAML::Mark m = node.Mark();
  throw config_error(ctx.file, m.line + 1, m.column + 1, msg);
}

void require_map(const Ctx& ctx, const YAML::Node& n, const char* what) {
  if (!n.IsMap()) fail(ctx, n, std::string(what) + " must be a mapping");
}

void reject_unknown_keys(const Ctx& ctx, const YAML::Node& map,
                         std::initializer_list<const char*> allowed) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>("");
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) fail(ctx, kv.first, "unknown key '" + key + "'");
  }
}

double num(const Ctx& ctx, const YAML::Node& n, const char* what) {
  if (!n.IsScalar()) fail(ctx, n, std::string(what) + " must be a number");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(ctx, n, std::string(what) + " is not a valid number");
  }
}

double num_or(const Ctx& ctx, const YAML::Node& map, const char* key, double dflt) {
  const YAML::Node n = map[key];
  return n ? num(ctx, n, key) : dflt;
}

std::string str(const Ctx& ctx, const YAML::Node& n, const char* what) {
  if (!n.IsScalar()) fail(ctx, n, std::string(what) + " must be a string");
  return n.as<std::string>();
}

Rect parse_rect_um(const Ctx& ctx, const YAML::Node& n, const char* what) {
  require_map(ctx, n, what);
  reject_unknown_keys(ctx, n, {"y_min", "y_max", "z_min", "z_max"});
  for (const char* k : {"y_min", "y_max", "z_min", "z_max"})
    if (!n[k]) fail(ctx, n, std::string(what) + " needs " + k);
  return {num(ctx, n["y_min"], "y_min") * um, num(ctx, n["y_max"], "y_max") * um,
          num(ctx, n["z_min"], "z_min") * um, num(ctx, n["z_max"], "z_max") * um};
}

ElectrodeKind parse_kind(const Ctx& ctx, const YAML::Node& n) {
  const std::string s = str(ctx, n, "electrode kind");
  if (s == "rf") return ElectrodeKind::rf;
  if (s == "center-dc") return ElectrodeKind::center_dc;
  if (s == "outer-dc") return ElectrodeKind::outer_dc;
  fail(ctx, n, "electrode kind must be rf, center-dc, or outer-dc (got '" + s + "')");
}

TrapLayout parse_layout(const Ctx& ctx, const YAML::Node& n) {
  if (n.IsScalar()) {
    if (n.as<std::string>() == "reference") return build_reference_layout();
    fail(ctx, n, "layout must be 'reference' or a mapping");
  }
  require_map(ctx, n, "layout");
  reject_unknown_keys(ctx, n, {"sim_region", "metadata", "electrodes"});
  TrapLayout t;
  if (!n["sim_region"]) fail(ctx, n, "layout needs sim_region");
  t.sim_region = parse_rect_um(ctx, n["sim_region"], "sim_region");
  if (const YAML::Node meta = n["metadata"]) {
    require_map(ctx, meta, "metadata");
    reject_unknown_keys(ctx, meta, {"thickness_um", "ground_gap_um", "epsilon_r"});
    t.metadata.electrode_thickness = num_or(ctx, meta, "thickness_um", 6.0) * um;
    t.metadata.ground_gap = num_or(ctx, meta, "ground_gap_um", 3.0) * um;
    t.metadata.cladding_epsilon_r = num_or(ctx, meta, "epsilon_r", 3.9);
  }
  const YAML::Node electrodes = n["electrodes"];
  if (!electrodes || !electrodes.IsSequence() || electrodes.size() == 0)
    fail(ctx, n, "layout needs a non-empty electrodes list");
  for (const auto& en : electrodes) {
    require_map(ctx, en, "electrode");
    reject_unknown_keys(ctx, en, {"id", "kind", "y_min", "y_max", "z_min", "z_max"});
    Electrode e;
    if (!en["id"]) fail(ctx, en, "electrode needs an id");
    e.id = str(ctx, en["id"], "electrode id");
    if (!en["kind"]) fail(ctx, en, "electrode needs a kind");
    e.kind = parse_kind(ctx, en["kind"]);
    for (const char* k : {"y_min", "y_max", "z_min", "z_max"})
      if (!en[k]) fail(ctx, en, std::string("electrode needs ") + k);
    e.region = {num(ctx, en["y_min"], "y_min") * um, num(ctx, en["y_max"], "y_max") * um,
                num(ctx, en["z_min"], "z_min") * um, num(ctx, en["z_max"], "z_max") * um};
    // Validate incrementally so errors carry this electrode's position.
    TrapLayout probe = t;
    probe.electrodes.push_back(e);
    try {
      probe.validate();
    } catch (const layout_error& err) {
      fail(ctx, en, err.what());
    }
    t.electrodes.push_back(std::move(e));
  }
  return t;
}

std::optional<TcoCoating> parse_coating(const Ctx& ctx, const YAML::Node& n) {
  if (!n) return std::nullopt;
  require_map(ctx, n, "coating");
  reject_unknown_keys(ctx, n, {"sigma", "thickness_nm"});
  TcoCoating c;
  if (!n["sigma"]) fail(ctx, n, "coating needs sigma (S/m)");
  c.sigma = num(ctx, n["sigma"], "sigma");
  c.thickness = num_or(ctx, n, "thickness_nm", 50.0) * constants::nm;
  if (!(c.sigma > 0.0)) fail(ctx, n["sigma"], "sigma must be > 0");
  if (!(c.thickness > 0.0)) fail(ctx, n["thickness_nm"], "thickness_nm must be > 0");
  return c;
}

ApertureSpec parse_aperture(const Ctx& ctx, const YAML::Node& n) {
  require_map(ctx, n, "aperture");
  reject_unknown_keys(ctx, n, {"p_y", "p_z", "w_a", "coating"});
  ApertureSpec a;
  if (!n["w_a"]) fail(ctx, n, "aperture needs w_a (um)");
  a.p_y = num_or(ctx, n, "p_y", 0.0) * um;
  a.p_z = num_or(ctx, n, "p_z", 0.0) * um;
  a.w_a = num(ctx, n["w_a"], "w_a") * um;
  if (!(a.w_a > 0.0)) fail(ctx, n["w_a"], "w_a must be > 0");
  a.coating = parse_coating(ctx, n["coating"]);
  return a;
}

Drive parse_drive(const Ctx& ctx, const YAML::Node& n, const TrapLayout& layout) {
  Drive d;
  double freq_mhz = 16.0;
  double rf_voltage = 100.0;
  const YAML::Node exc = n ? n["excitations"] : YAML::Node(YAML::NodeType::Undefined);
  if (n) {
    require_map(ctx, n, "drive");
    reject_unknown_keys(ctx, n, {"rf_voltage", "rf_frequency_mhz", "excitations"});
    freq_mhz = num_or(ctx, n, "rf_frequency_mhz", 16.0);
    rf_voltage = num_or(ctx, n, "rf_voltage", 100.0);
    if (!(freq_mhz > 0.0)) fail(ctx, n["rf_frequency_mhz"], "rf_frequency_mhz must be > 0");
  }
  d.rf_omega = constants::two_pi * freq_mhz * 1e6;
  if (exc && exc.IsDefined()) {
    require_map(ctx, exc, "excitations");
    for (const auto& kv : exc) {
      const std::string id = kv.first.as<std::string>("");
      if (!layout.find(id)) fail(ctx, kv.first, "excitation for unknown electrode '" + id + "'");
      require_map(ctx, kv.second, "excitation");
      reject_unknown_keys(ctx, kv.second, {"amplitude", "phase_deg", "kind"});
      Excitation e;
      e.amplitude = num_or(ctx, kv.second, "amplitude", 0.0);
      e.phase = num_or(ctx, kv.second, "phase_deg", 0.0) * constants::pi / 180.0;
      const std::string kind =
          kv.second["kind"] ? str(ctx, kv.second["kind"], "kind") : "dc";
      if (kind == "rf") e.kind = DriveKind::rf;
      else if (kind == "dc") e.kind = DriveKind::dc;
      else fail(ctx, kv.second["kind"], "excitation kind must be rf or dc");
      d.set(id, e);
    }
  } else {
    // Shorthand: every rf-kind electrode driven at rf_voltage, rest grounded.
    for (const auto& e : layout.electrodes)
      d.set(e.id, e.kind == ElectrodeKind::rf
                      ? Excitation{rf_voltage, 0.0, DriveKind::rf}
                      : Excitation{0.0, 0.0, DriveKind::dc});
  }
  return d;
}

SweepVariable parse_variable(const Ctx& ctx, const YAML::Node& n) {
  const std::string s = str(ctx, n, "sweep variable");
  if (s == "p_y") return SweepVariable::p_y;
  if (s == "p_z") return SweepVariable::p_z;
  if (s == "w_a") return SweepVariable::w_a;
  if (s == "sigma") return SweepVariable::sigma;
  if (s == "symmetry") return SweepVariable::symmetry;
  if (s == "electrode") return SweepVariable::electrode;
  fail(ctx, n, "sweep variable must be p_y, p_z, w_a, sigma, symmetry, or electrode");
}

// Numeric sweep values are given in config units (um, or S/m for sigma).
double value_scale(SweepVariable v) {
  return v == SweepVariable::sigma ? 1.0 : um;
}

std::vector<SweepValue> parse_values(const Ctx& ctx, const YAML::Node& sweep,
                                     SweepVariable var) {
  const double scale = value_scale(var);
  std::vector<SweepValue> out;
  if (const YAML::Node vals = sweep["values"]) {
    if (!vals.IsSequence() || vals.size() == 0)
      fail(ctx, vals, "values must be a non-empty list");
    for (const auto& v : vals) {
      if (var == SweepVariable::symmetry || var == SweepVariable::electrode)
        out.emplace_back(str(ctx, v, "sweep value"));
      else
        out.emplace_back(num(ctx, v, "sweep value") * scale);
    }
    return out;
  }
  if (var == SweepVariable::symmetry || var == SweepVariable::electrode)
    fail(ctx, sweep, "label sweeps need an explicit values list");
  if (const YAML::Node lg = sweep["log_range"]) {
    require_map(ctx, lg, "log_range");
    reject_unknown_keys(ctx, lg, {"start_decade", "stop_decade", "per_decade"});
    for (const char* k : {"start_decade", "stop_decade", "per_decade"})
      if (!lg[k]) fail(ctx, lg, std::string("log_range needs ") + k);
    const double d0 = num(ctx, lg["start_decade"], "start_decade");
    const double d1 = num(ctx, lg["stop_decade"], "stop_decade");
    const int per = int(num(ctx, lg["per_decade"], "per_decade"));
    if (per < 1 || d1 < d0) fail(ctx, lg, "log_range needs stop >= start, per_decade >= 1");
    const int n = int(std::lround((d1 - d0) * per));
    for (int k = 0; k <= n; ++k)
      out.emplace_back(std::pow(10.0, d0 + double(k) / per) * scale);
    return out;
  }
  if (const YAML::Node rg = sweep["range"]) {
    require_map(ctx, rg, "range");
    reject_unknown_keys(ctx, rg, {"start", "stop", "step", "count"});
    if (!rg["start"] || !rg["stop"]) fail(ctx, rg, "range needs start and stop");
    const double a = num(ctx, rg["start"], "start"), b = num(ctx, rg["stop"], "stop");
    if (rg["count"]) {
      const int count = int(num(ctx, rg["count"], "count"));
      if (count < 1) fail(ctx, rg["count"], "count must be >= 1");
      for (int i = 0; i < count; ++i)
        out.emplace_back((count == 1 ? a : a + (b - a) * i / (count - 1)) * scale);
    } else if (rg["step"]) {
      const double step = num(ctx, rg["step"], "step");
      if (!(step > 0.0) || b < a) fail(ctx, rg, "range needs stop >= start, step > 0");
      for (double v = a; v <= b + 0.5 * step; v += step) out.emplace_back(v * scale);
    } else {
      fail(ctx, rg, "range needs step or count");
    }
    return out;
  }
  fail(ctx, sweep, "sweep needs values, range, or log_range");
}

AnalysisKind parse_analysis(const Ctx& ctx, const YAML::Node& n) {
  const std::string s = str(ctx, n, "analysis");
  if (s == "null-point") return AnalysisKind::null_point;
  if (s == "displacement") return AnalysisKind::displacement;
  if (s == "axial-scan") return AnalysisKind::axial_scan;
  if (s == "peak-metrics") return AnalysisKind::peak_metrics;
  if (s == "metrics") return AnalysisKind::trap_metrics;
  fail(ctx, n, "analysis must be null-point, displacement, axial-scan, peak-metrics, "
               "or metrics (got '" + s + "')");
}

}  // namespace

Experiment parse_config(const std::string& yaml_text, const std::string& filename) {
  Ctx ctx{filename};
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw config_error(filename, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  require_map(ctx, root, "config");
  reject_unknown_keys(ctx, root, {"name", "layout", "drive", "ion", "apertures",
                                  "symmetrize", "sweep", "analyses", "scan", "output"});
  Experiment e;
  e.name = root["name"] ? str(ctx, root["name"], "name") : "run";

  e.layout = root["layout"] ? parse_layout(ctx, root["layout"])
                            : build_reference_layout();
  e.drive = parse_drive(ctx, root["drive"], e.layout);

  if (const YAML::Node ion = root["ion"]) {
    require_map(ctx, ion, "ion");
    reject_unknown_keys(ctx, ion, {"mass_amu", "charge_e"});
    const double amu = num_or(ctx, ion, "mass_amu", 172.0);
    const double qe = num_or(ctx, ion, "charge_e", 1.0);
    if (!(amu > 0.0) || !(qe > 0.0)) fail(ctx, ion, "ion mass and charge must be > 0");
    e.ion = IonSpecies::from_amu(amu, qe);
  }

  if (const YAML::Node aps = root["apertures"]) {
    if (!aps.IsSequence()) fail(ctx, aps, "apertures must be a list");
    for (const auto& an : aps) {
      ApertureSpec a = parse_aperture(ctx, an);
      // Probe the placement now so the error points at this aperture.
      try {
        TrapLayout probe = e.layout;
        add_aperture(probe, Aperture::square(a.p_y, a.p_z, a.w_a, a.coating));
        probe.validate();
      } catch (const layout_error& err) {
        fail(ctx, an, err.what());
      }
      e.apertures.push_back(std::move(a));
    }
  }

  if (const YAML::Node sym = root["symmetrize"]) {
    if (!sym.IsSequence()) fail(ctx, sym, "symmetrize must be a list of axes");
    for (const auto& an : sym) {
      const std::string s = str(ctx, an, "axis");
      if (s == "z") e.symmetrize_axes.push_back(Axis::z);
      else if (s == "y") e.symmetrize_axes.push_back(Axis::y);
      else fail(ctx, an, "axis must be y or z");
    }
  }

  if (const YAML::Node sweep = root["sweep"]) {
    require_map(ctx, sweep, "sweep");
    reject_unknown_keys(ctx, sweep, {"variable", "values", "range", "log_range"});
    if (!sweep["variable"]) fail(ctx, sweep, "sweep needs a variable");
    e.variable = parse_variable(ctx, sweep["variable"]);
    e.values = parse_values(ctx, sweep, e.variable);
  } else {
    e.variable = SweepVariable::symmetry;
    e.values = {std::string(e.apertures.empty() ? kSymmetryReference : kSymmetrySingle)};
  }

  if (const YAML::Node an = root["analyses"]) {
    if (!an.IsSequence() || an.size() == 0)
      fail(ctx, an, "analyses must be a non-empty list");
    for (const auto& a : an) e.analyses.push_back(parse_analysis(ctx, a));
  } else {
    e.analyses = {AnalysisKind::null_point, AnalysisKind::displacement};
  }

  if (const YAML::Node sc = root["scan"]) {
    require_map(ctx, sc, "scan");
    reject_unknown_keys(ctx, sc, {"z_min_um", "z_max_um", "samples"});
    e.scan.z_min = num_or(ctx, sc, "z_min_um", -1000.0) * um;
    e.scan.z_max = num_or(ctx, sc, "z_max_um", 1000.0) * um;
    e.scan.samples = int(num_or(ctx, sc, "samples", 2001));
    if (!(e.scan.z_max > e.scan.z_min)) fail(ctx, sc, "scan needs z_max_um > z_min_um");
    if (e.scan.samples < 2) fail(ctx, sc, "scan needs samples >= 2");
  }

  if (const YAML::Node out = root["output"]) {
    require_map(ctx, out, "output");
    reject_unknown_keys(ctx, out, {"csv", "json"});
    if (out["csv"]) e.csv_name = str(ctx, out["csv"], "csv");
    if (out["json"]) e.json_name = str(ctx, out["json"], "json");
  }

  try {
    e.validate();
  } catch (const layout_error& err) {
    fail(ctx, root, err.what());
  }
  return e;
}

Experiment load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path.string(), 0, 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void Experiment::validate() const {
  layout.validate();
  if (values.empty()) throw layout_error("experiment: empty sweep value list");
  if (analyses.empty()) throw layout_error("experiment: no analyses requested");
  if (!(ion.mass > 0.0) || !(ion.charge > 0.0))
    throw layout_error("experiment: ion mass and charge must be > 0");
  if (!(drive.rf_omega > 0.0)) throw layout_error("experiment: rf_omega must be > 0");
  bool any_rf = false;
  for (const auto& [id, exc] : drive.excitations) {
    if (!layout.find(id)) throw layout_error("experiment: drive references unknown electrode '" + id + "'");
    if (exc.kind == DriveKind::rf && exc.amplitude != 0.0) any_rf = true;
  }
  if (!any_rf) throw layout_error("experiment: needs at least one driven rf electrode");

  const bool numeric = variable != SweepVariable::symmetry && variable != SweepVariable::electrode;
  if ((numeric || variable == SweepVariable::electrode) && apertures.empty())
    throw layout_error("experiment: this sweep variable needs an aperture");
  if (variable == SweepVariable::sigma && (apertures.empty() || !apertures[0].coating))
    throw layout_error("experiment: sigma sweep needs a coated first aperture");
  for (const auto& v : values) {
    if (numeric) {
      if (!std::holds_alternative<double>(v))
        throw layout_error("experiment: numeric sweep with a label value");
      const double x = std::get<double>(v);
      if (variable == SweepVariable::w_a && !(x > 0.0))
        throw layout_error("experiment: w_a values must be > 0");
      if (variable == SweepVariable::sigma && !(x > 0.0))
        throw layout_error("experiment: sigma values must be > 0");
    } else {
      if (!std::holds_alternative<std::string>(v))
        throw layout_error("experiment: label sweep with a numeric value");
      const std::string& s = std::get<std::string>(v);
      if (variable == SweepVariable::symmetry) {
        if (s != kSymmetryReference && s != kSymmetrySingle &&
            s != kSymmetryZMirrored && s != kSymmetryFullyMirrored)
          throw layout_error("experiment: unknown symmetry label '" + s + "'");
        if (s != kSymmetryReference && apertures.empty())
          throw layout_error("experiment: symmetry label '" + s + "' needs an aperture");
      } else {
        if (s != "rf" && s != "center-dc" && s != "outer-dc")
          throw layout_error("experiment: unknown electrode label '" + s + "'");
      }
    }
  }
  for (const auto& a : apertures)
    if (!(a.w_a > 0.0)) throw layout_error("experiment: aperture w_a must be > 0");
  if (!(scan.z_max > scan.z_min) || scan.samples < 2)
    throw layout_error("experiment: invalid scan settings");
}

namespace {

bool is_reference_layout(const TrapLayout& t) {
  static const TrapLayout ref = build_reference_layout();
  if (t.electrodes.size() != ref.electrodes.size()) return false;
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-15; };
  if (!near(t.sim_region.y_min, ref.sim_region.y_min) ||
      !near(t.sim_region.y_max, ref.sim_region.y_max) ||
      !near(t.sim_region.z_min, ref.sim_region.z_min) ||
      !near(t.sim_region.z_max, ref.sim_region.z_max))
    return false;
  for (size_t i = 0; i < t.electrodes.size(); ++i) {
    const Electrode &a = t.electrodes[i], &b = ref.electrodes[i];
    if (a.id != b.id || a.kind != b.kind || !a.apertures.empty()) return false;
    if (!near(a.region.y_min, b.region.y_min) || !near(a.region.y_max, b.region.y_max) ||
        !near(a.region.z_min, b.region.z_min) || !near(a.region.z_max, b.region.z_max))
      return false;
  }
  return true;
}

}  // namespace

std::string to_yaml(const Experiment& e) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << e.name;

  out << YAML::Key << "layout" << YAML::Value;
  if (is_reference_layout(e.layout)) {
    out << "reference";
  } else {
    out << YAML::BeginMap;
    out << YAML::Key << "sim_region" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "y_min" << YAML::Value << e.layout.sim_region.y_min / um
        << YAML::Key << "y_max" << YAML::Value << e.layout.sim_region.y_max / um
        << YAML::Key << "z_min" << YAML::Value << e.layout.sim_region.z_min / um
        << YAML::Key << "z_max" << YAML::Value << e.layout.sim_region.z_max / um
        << YAML::EndMap;
    out << YAML::Key << "metadata" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "thickness_um" << YAML::Value << e.layout.metadata.electrode_thickness / um
        << YAML::Key << "ground_gap_um" << YAML::Value << e.layout.metadata.ground_gap / um
        << YAML::Key << "epsilon_r" << YAML::Value << e.layout.metadata.cladding_epsilon_r
        << YAML::EndMap;
    out << YAML::Key << "electrodes" << YAML::Value << YAML::BeginSeq;
    for (const auto& el : e.layout.electrodes) {
      out << YAML::Flow << YAML::BeginMap
          << YAML::Key << "id" << YAML::Value << el.id
          << YAML::Key << "kind" << YAML::Value << to_string(el.kind)
          << YAML::Key << "y_min" << YAML::Value << el.region.y_min / um
          << YAML::Key << "y_max" << YAML::Value << el.region.y_max / um
          << YAML::Key << "z_min" << YAML::Value << el.region.z_min / um
          << YAML::Key << "z_max" << YAML::Value << el.region.z_max / um
          << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
  }

  out << YAML::Key << "drive" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rf_frequency_mhz" << YAML::Value
      << e.drive.rf_omega / (constants::two_pi * 1e6);
  out << YAML::Key << "excitations" << YAML::Value << YAML::BeginMap;
  for (const auto& [id, exc] : e.drive.excitations) {
    out << YAML::Key << id << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "amplitude" << YAML::Value << exc.amplitude
        << YAML::Key << "phase_deg" << YAML::Value << exc.phase * 180.0 / constants::pi
        << YAML::Key << "kind" << YAML::Value << to_string(exc.kind)
        << YAML::EndMap;
  }
  out << YAML::EndMap << YAML::EndMap;

  out << YAML::Key << "ion" << YAML::Value << YAML::Flow << YAML::BeginMap
      << YAML::Key << "mass_amu" << YAML::Value << e.ion.mass / constants::atomic_mass_unit
      << YAML::Key << "charge_e" << YAML::Value << e.ion.charge / constants::elementary_charge
      << YAML::EndMap;

  if (!e.apertures.empty()) {
    out << YAML::Key << "apertures" << YAML::Value << YAML::BeginSeq;
    for (const auto& a : e.apertures) {
      out << YAML::Flow << YAML::BeginMap
          << YAML::Key << "p_y" << YAML::Value << a.p_y / um
          << YAML::Key << "p_z" << YAML::Value << a.p_z / um
          << YAML::Key << "w_a" << YAML::Value << a.w_a / um;
      if (a.coating)
        out << YAML::Key << "coating" << YAML::Value << YAML::Flow << YAML::BeginMap
            << YAML::Key << "sigma" << YAML::Value << a.coating->sigma
            << YAML::Key << "thickness_nm" << YAML::Value << a.coating->thickness / constants::nm
            << YAML::EndMap;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  if (!e.symmetrize_axes.empty()) {
    out << YAML::Key << "symmetrize" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (Axis a : e.symmetrize_axes) out << (a == Axis::z ? "z" : "y");
    out << YAML::EndSeq;
  }

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "variable" << YAML::Value << to_string(e.variable);
  out << YAML::Key << "values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  const double scale = value_scale(e.variable);
  for (const auto& v : e.values) {
    if (std::holds_alternative<double>(v))
      out << std::get<double>(v) / scale;
    else
      out << std::get<std::string>(v);
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "analyses" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (AnalysisKind a : e.analyses) out << to_string(a);
  out << YAML::EndSeq;

  out << YAML::Key << "scan" << YAML::Value << YAML::Flow << YAML::BeginMap
      << YAML::Key << "z_min_um" << YAML::Value << e.scan.z_min / um
      << YAML::Key << "z_max_um" << YAML::Value << e.scan.z_max / um
      << YAML::Key << "samples" << YAML::Value << e.scan.samples
      << YAML::EndMap;

  if (!e.csv_name.empty() || !e.json_name.empty()) {
    out << YAML::Key << "output" << YAML::Value << YAML::Flow << YAML::BeginMap;
    if (!e.csv_name.empty()) out << YAML::Key << "csv" << YAML::Value << e.csv_name;
    if (!e.json_name.empty()) out << YAML::Key << "json" << YAML::Value << e.json_name;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::p_y: return "p_y";
    case SweepVariable::p_z: return "p_z";
    case SweepVariable::w_a: return "w_a";
    case SweepVariable::sigma: return "sigma";
    case SweepVariable::symmetry: return "symmetry";
    case SweepVariable::electrode: return "electrode";
  }
  return "?";
}

const char* to_string(AnalysisKind a) {
  switch (a) {
    case AnalysisKind::null_point: return "null-point";
    case AnalysisKind::displacement: return "displacement";
    case AnalysisKind::axial_scan: return "axial-scan";
    case AnalysisKind::peak_metrics: return "peak-metrics";
    case AnalysisKind::trap_metrics: return "metrics";
  }
  return "?";
}

}  // namespace surftrap
