#include "surftrap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace surftrap {

namespace {

constexpr double kCoincidenceTol = 1e-9;  // 1 nm: apertures closer than this are "the same"

std::string rect_str(const Rect& r) {
  std::ostringstream os;
  os << "[y " << r.y_min * 1e6 << ".." << r.y_max * 1e6 << " um, z "
     << r.z_min * 1e6 << ".." << r.z_max * 1e6 << " um]";
  return os.str();
}

bool same_rect(const Rect& a, const Rect& b, double tol) {
  return std::abs(a.y_min - b.y_min) < tol && std::abs(a.y_max - b.y_max) < tol &&
         std::abs(a.z_min - b.z_min) < tol && std::abs(a.z_max - b.z_max) < tol;
}

}  // namespace

const Electrode* TrapLayout::find(std::string_view id) const {
  for (const auto& e : electrodes)
    if (e.id == id) return &e;
  return nullptr;
}

Electrode* TrapLayout::find(std::string_view id) {
  for (auto& e : electrodes)
    if (e.id == id) return &e;
  return nullptr;
}

void TrapLayout::validate() const {
  if (!sim_region.valid()) throw layout_error("simulation region has inverted bounds");
  std::set<std::string> seen;
  for (const auto& e : electrodes) {
    if (e.id.empty()) throw layout_error("electrode with empty id");
    if (!seen.insert(e.id).second) throw layout_error("duplicate electrode id '" + e.id + "'");
    if (!e.region.valid() || e.region.area() <= 0.0)
      throw layout_error("electrode '" + e.id + "': degenerate region " + rect_str(e.region));
    if (!sim_region.contains(e.region))
      throw layout_error("electrode '" + e.id + "' escapes the simulation region");
    for (size_t i = 0; i < e.apertures.size(); ++i) {
      const Aperture& a = e.apertures[i];
      if (!a.patch.valid() || a.patch.area() <= 0.0)
        throw layout_error("electrode '" + e.id + "': degenerate aperture " + rect_str(a.patch));
      if (!e.region.contains(a.patch))
        throw layout_error("electrode '" + e.id + "': aperture " + rect_str(a.patch) +
                           " not inside the electrode");
      if (a.coating) {
        if (!(a.coating->sigma > 0.0))
          throw layout_error("electrode '" + e.id + "': coating conductivity must be > 0");
        if (!(a.coating->thickness > 0.0))
          throw layout_error("electrode '" + e.id + "': coating thickness must be > 0");
      }
      for (size_t j = i + 1; j < e.apertures.size(); ++j)
        if (a.patch.overlaps(e.apertures[j].patch))
          throw layout_error("electrode '" + e.id + "': overlapping apertures " +
                             rect_str(a.patch) + " and " + rect_str(e.apertures[j].patch));
    }
  }
  for (size_t i = 0; i < electrodes.size(); ++i)
    for (size_t j = i + 1; j < electrodes.size(); ++j)
      if (electrodes[i].region.overlaps(electrodes[j].region))
        throw layout_error("electrodes '" + electrodes[i].id + "' and '" +
                           electrodes[j].id + "' overlap");
  if (!(metadata.electrode_thickness > 0.0) || !(metadata.ground_gap > 0.0) ||
      !(metadata.cladding_epsilon_r >= 1.0))
    throw layout_error("metadata: thickness and ground gap must be > 0, epsilon_r >= 1");
}

const Excitation* Drive::find(std::string_view id) const {
  for (const auto& [eid, exc] : excitations)
    if (eid == id) return &exc;
  return nullptr;
}

void Drive::set(std::string_view id, Excitation e) {
  for (auto& [eid, exc] : excitations)
    if (eid == id) {
      exc = e;
      return;
    }
  excitations.emplace_back(std::string(id), e);
}

TrapLayout build_reference_layout() {
  using constants::um;
  TrapLayout t;
  t.sim_region = {-1200 * um, 1200 * um, -2500 * um, 2500 * um};

  auto strip = [&](const char* id, ElectrodeKind kind, double y_lo, double y_hi) {
    t.electrodes.push_back({id, kind, {y_lo * um, y_hi * um, -2500 * um, 2500 * um}, {}});
  };
  strip("cdc_p", ElectrodeKind::center_dc, 2.5, 46.8);
  strip("cdc_n", ElectrodeKind::center_dc, -46.8, -2.5);
  strip("rf_p", ElectrodeKind::rf, 51.8, 201.8);
  strip("rf_n", ElectrodeKind::rf, -201.8, -51.8);

  // Five segments per side: 996 um long on a 1001 um pitch, so the four 5 um
  // axial gaps bring the chain to exactly 5 mm.
  for (int k = -2; k <= 2; ++k) {
    const double zc = 1001.0 * k;
    const Rect zspan{206.8 * um, 406.8 * um, (zc - 498) * um, (zc + 498) * um};
    t.electrodes.push_back({"odc_p" + std::to_string(k + 3), ElectrodeKind::outer_dc, zspan, {}});
    t.electrodes.push_back({"odc_n" + std::to_string(k + 3), ElectrodeKind::outer_dc,
                            zspan.mirrored_y(), {}});
  }
  t.validate();
  return t;
}

Drive build_reference_drive(double u_rf, double rf_omega) {
  Drive d;
  d.rf_omega = rf_omega;
  d.set("rf_p", {u_rf, 0.0, DriveKind::rf});
  d.set("rf_n", {u_rf, 0.0, DriveKind::rf});
  for (const char* id : {"cdc_p", "cdc_n"}) d.set(id, {0.0, 0.0, DriveKind::dc});
  for (int i = 1; i <= 5; ++i) {
    d.set("odc_p" + std::to_string(i), {0.0, 0.0, DriveKind::dc});
    d.set("odc_n" + std::to_string(i), {0.0, 0.0, DriveKind::dc});
  }
  return d;
}

PatchSet decompose(const Electrode& e) {
  PatchSet out;
  for (const auto& a : e.apertures) out.holes.push_back(a.patch);

  // Slab sweep along z: cut at every hole edge, then within each slab emit
  // the y-intervals not covered by a hole.  Every hole spans any slab it
  // touches, because slab boundaries include all hole edges.
  std::vector<double> cuts{e.region.z_min, e.region.z_max};
  for (const auto& h : out.holes) {
    cuts.push_back(h.z_min);
    cuts.push_back(h.z_max);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double z0 = cuts[s], z1 = cuts[s + 1];
    if (z1 <= z0) continue;
    const double zm = 0.5 * (z0 + z1);
    std::vector<std::pair<double, double>> spans;  // hole y-intervals in this slab
    for (const auto& h : out.holes)
      if (h.z_min < zm && zm < h.z_max) spans.emplace_back(h.y_min, h.y_max);
    std::sort(spans.begin(), spans.end());
    double y = e.region.y_min;
    for (const auto& [lo, hi] : spans) {
      if (lo > y) out.solids.push_back({y, lo, z0, z1});
      y = std::max(y, hi);
    }
    if (y < e.region.y_max) out.solids.push_back({y, e.region.y_max, z0, z1});
  }
  return out;
}

TrapLayout symmetrize(const TrapLayout& layout, const std::vector<Axis>& axes) {
  TrapLayout out = layout;
  for (Axis axis : axes) {
    struct Pending {
      Electrode* target;
      Aperture aperture;
    };
    std::vector<Pending> pending;
    auto exists = [&](const Rect& r) {
      for (const auto& e : out.electrodes)
        for (const auto& a : e.apertures)
          if (same_rect(a.patch, r, kCoincidenceTol)) return true;
      for (const auto& p : pending)
        if (same_rect(p.aperture.patch, r, kCoincidenceTol)) return true;
      return false;
    };
    for (auto& e : out.electrodes) {
      for (const auto& a : e.apertures) {
        const Rect m = axis == Axis::z ? a.patch.mirrored_y() : a.patch.mirrored_z();
        if (exists(m)) continue;
        Electrode* host = nullptr;
        for (auto& cand : out.electrodes)
          if (cand.region.contains(m)) {
            host = &cand;
            break;
          }
        if (!host)
          throw layout_error("symmetrize: mirrored aperture " + rect_str(m) +
                             " falls outside every electrode");
        pending.push_back({host, {m, a.coating}});
      }
    }
    for (auto& p : pending) p.target->apertures.push_back(std::move(p.aperture));
  }
  out.validate();
  return out;
}

void add_aperture(TrapLayout& layout, const Aperture& aperture) {
  if (!aperture.patch.valid() || aperture.patch.area() <= 0.0)
    throw layout_error("add_aperture: degenerate aperture " + rect_str(aperture.patch));
  int placed = 0;
  for (auto& e : layout.electrodes) {
    if (auto clip = e.region.intersection(aperture.patch); clip && clip->area() > 0.0) {
      e.apertures.push_back({*clip, aperture.coating});
      ++placed;
    }
  }
  if (placed == 0)
    throw layout_error("add_aperture: aperture " + rect_str(aperture.patch) +
                       " overlaps no electrode");
}

const char* to_string(ElectrodeKind k) {
  switch (k) {
    case ElectrodeKind::rf: return "rf";
    case ElectrodeKind::center_dc: return "center-dc";
    case ElectrodeKind::outer_dc: return "outer-dc";
  }
  return "?";
}

const char* to_string(DriveKind k) {
  return k == DriveKind::rf ? "rf" : "dc";
}

}  // namespace surftrap
