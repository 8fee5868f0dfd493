#pragma once

// Sweep executor: evaluates every sweep value (optionally across worker
// threads, with bitwise-identical output regardless of worker count) and
// writes a records CSV, per-record scan CSVs, and a JSON run manifest.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "surftrap/analysis.hpp"
#include "surftrap/config.hpp"
#include "surftrap/rfdynamics.hpp"

namespace surftrap {

struct ResultRecord {
  int index = 0;
  SweepValue value;
  double theta = std::numeric_limits<double>::quiet_NaN();  // rad, atan(p_y / ion height)
  std::optional<NullResult> null_point;
  std::optional<Displacement> disp;
  std::optional<PeakMetrics> ex, ey, ez;
  std::optional<SecularModes> modes;
  std::optional<TrapDepth> depth;
  std::optional<MathieuQ> q;
  std::optional<AxialScan> scan;
  std::vector<std::string> notes;  // per-analysis issues, benign or fatal
  bool failed = false;             // a requested analysis failed numerically
};

struct RunOptions {
  int workers = 0;                 // 0: SURFTRAP_WORKERS env, else hardware
  double resolution = 1.0;         // scales scan sampling and search grids
  bool json_records = false;       // embed full records in the JSON output
  bool write_files = true;
  std::filesystem::path out_dir = ".";
};

struct RunResult {
  std::vector<ResultRecord> records;
  std::vector<std::string> failures;  // "value: message" for failed records
  int exit_code = 0;                  // 0 ok, 3 numerical failure
  std::filesystem::path csv_path;     // empty when not written
  std::filesystem::path json_path;
  std::vector<std::filesystem::path> scan_paths;
};

RunResult run_experiment(const Experiment& e, const RunOptions& opt = {});

// Deterministic serializations (also what run_experiment writes).
std::string records_to_csv(const Experiment& e, const std::vector<ResultRecord>& records);
std::string scan_to_csv(const AxialScan& scan);
std::string run_manifest_json(const Experiment& e, const RunResult& result,
                              const RunOptions& opt, const std::string& timestamp);

// Materialize one sweep record's layout (aperture override + placement +
// symmetrization).  Exposed for tests and the CLI.
TrapLayout layout_for_value(const Experiment& e, const SweepValue& value);
// p_y used for the record's theta column (NaN when no aperture applies).
double aperture_py_for_value(const Experiment& e, const SweepValue& value);

// Built-in, self-contained experiments.
std::vector<std::string> preset_names();
Experiment make_preset(const std::string& name);  // throws layout_error if unknown

int resolve_worker_count(const RunOptions& opt, int record_count);
std::string code_version();

}  // namespace surftrap
