#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>
#include <surftrap/errors.hpp>
#include <surftrap/runner.hpp>

#ifdef SURFTRAP_CLI_PATH
#include <sys/wait.h>
#endif

using namespace surftrap;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir() {
  static std::mt19937_64 rng{std::random_device{}()};
  const fs::path p =
      fs::temp_directory_path() / ("surftrap_test_" + std::to_string(rng()));
  fs::create_directories(p);
  return p;
}

struct TempDir {
  fs::path path = make_temp_dir();
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int count_fields(const std::string& line) {
  // Good enough for our output: quoted fields never contain commas in tests.
  int n = 1;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) ++n;
  }
  return n;
}

#ifdef SURFTRAP_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(SURFTRAP_CLI_PATH) + " " + args +
                          " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
#endif

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("presets exist and validate") {
  const auto names = preset_names();
  for (const char* required :
       {"single-aperture-three-electrodes", "wa-sweep", "reference-axial",
        "symmetry-study", "tco-conductivity", "pz-sweep", "py-sweep",
        "gap-crossing"}) {
    CAPTURE(required);
    CHECK(std::find(names.begin(), names.end(), required) != names.end());
  }
  for (const auto& n : names) {
    CAPTURE(n);
    const Experiment e = make_preset(n);
    CHECK_NOTHROW(e.validate());
    CHECK(e.name == n);
  }
  CHECK_THROWS_AS((void)make_preset("no-such-preset"), layout_error);
}

TEST_CASE("layout_for_value applies the swept variable") {
  SUBCASE("p_y moves the hole") {
    const Experiment e = make_preset("py-sweep");
    const TrapLayout l = layout_for_value(e, SweepValue{140e-6});
    const Electrode* rf = l.find("rf_p");
    REQUIRE(rf != nullptr);
    REQUIRE(rf->apertures.size() == 1);
    CHECK(rf->apertures[0].center_y() == doctest::Approx(140e-6));
    CHECK(aperture_py_for_value(e, SweepValue{140e-6}) == doctest::Approx(140e-6));
  }
  SUBCASE("w_a resizes the hole") {
    const Experiment e = make_preset("wa-sweep");
    const TrapLayout l = layout_for_value(e, SweepValue{60e-6});
    CHECK(l.find("rf_p")->apertures[0].width() == doctest::Approx(60e-6));
  }
  SUBCASE("sigma recoats the hole") {
    const Experiment e = make_preset("tco-conductivity");
    const TrapLayout l = layout_for_value(e, SweepValue{123.0});
    const auto& ap = l.find("rf_p")->apertures[0];
    REQUIRE(ap.coating.has_value());
    CHECK(ap.coating->sigma == doctest::Approx(123.0));
  }
  SUBCASE("electrode labels recentre the hole on the matching electrode") {
    const Experiment e = make_preset("single-aperture-three-electrodes");
    const TrapLayout lrf = layout_for_value(e, SweepValue{std::string("rf")});
    CHECK(lrf.find("rf_p")->apertures.size() == 1);

    const TrapLayout lc = layout_for_value(e, SweepValue{std::string("center-dc")});
    REQUIRE(lc.find("cdc_p")->apertures.size() == 1);
    CHECK(lc.find("cdc_p")->apertures[0].center_y() == doctest::Approx(24.65e-6));

    const TrapLayout lo = layout_for_value(e, SweepValue{std::string("outer-dc")});
    REQUIRE(lo.find("odc_p3")->apertures.size() == 1);
    CHECK(lo.find("odc_p3")->apertures[0].center_y() == doctest::Approx(306.8e-6));
  }
  SUBCASE("symmetry labels") {
    const Experiment e = make_preset("symmetry-study");
    const TrapLayout ref = layout_for_value(e, SweepValue{std::string(kSymmetryReference)});
    int n = 0;
    for (const auto& el : ref.electrodes) n += int(el.apertures.size());
    CHECK(n == 0);

    const TrapLayout single = layout_for_value(e, SweepValue{std::string(kSymmetrySingle)});
    n = 0;
    for (const auto& el : single.electrodes) n += int(el.apertures.size());
    CHECK(n == 1);

    const TrapLayout pair = layout_for_value(e, SweepValue{std::string(kSymmetryZMirrored)});
    n = 0;
    for (const auto& el : pair.electrodes) n += int(el.apertures.size());
    CHECK(n == 2);

    const TrapLayout quad = layout_for_value(e, SweepValue{std::string(kSymmetryFullyMirrored)});
    n = 0;
    for (const auto& el : quad.electrodes) n += int(el.apertures.size());
    CHECK(n == 4);
  }
}

TEST_CASE("worker resolution") {
  RunOptions opt;
  opt.workers = 3;
  CHECK(resolve_worker_count(opt, 100) == 3);
  CHECK(resolve_worker_count(opt, 2) == 2);  // never more workers than records

  opt.workers = 0;
  setenv("SURFTRAP_WORKERS", "5", 1);
  CHECK(resolve_worker_count(opt, 100) == 5);
  unsetenv("SURFTRAP_WORKERS");
  CHECK(resolve_worker_count(opt, 100) >= 1);
}

TEST_CASE("csv output is deterministic across worker counts") {
  Experiment e = make_preset("gap-crossing");
  RunOptions opt;
  opt.write_files = false;

  opt.workers = 1;
  const RunResult serial = run_experiment(e, opt);
  REQUIRE(serial.exit_code == 0);
  opt.workers = 4;
  const RunResult parallel = run_experiment(e, opt);
  REQUIRE(parallel.exit_code == 0);
  opt.workers = 7;
  const RunResult odd = run_experiment(e, opt);

  const std::string a = records_to_csv(e, serial.records);
  const std::string b = records_to_csv(e, parallel.records);
  const std::string cc = records_to_csv(e, odd.records);
  CHECK(a == b);
  CHECK(b == cc);
  CHECK(a.find("gap") == std::string::npos);  // no incidental text, data only
}

TEST_CASE("csv shape and content") {
  Experiment e = make_preset("py-sweep");
  e.values = {SweepValue{110e-6}, SweepValue{126.8e-6}};
  RunOptions opt;
  opt.write_files = false;
  opt.workers = 2;
  const RunResult r = run_experiment(e, opt);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.records.size() == 2);

  const std::string csv = records_to_csv(e, r.records);
  std::istringstream in(csv);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header.rfind("index,sweep_variable,sweep_value,theta_deg,", 0) == 0);
  CHECK(header.find("null_x_um") != std::string::npos);
  CHECK(header.find("dy_um") != std::string::npos);
  CHECK(header.find("ey_peak_V_per_m") != std::string::npos);
  CHECK(header.find("notes") != std::string::npos);

  const int want = count_fields(header);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CHECK(count_fields(line) == want);
    ++rows;
  }
  CHECK(rows == 2);

  // The swept value is reported in display units (um).
  CHECK(csv.find(",p_y,") != std::string::npos);
  CHECK(csv.find(",110,") != std::string::npos);
  CHECK(csv.find(",126.8,") != std::string::npos);

  // Geometry column: tilt angle from the reference ion to the hole centre.
  const double theta = r.records[0].theta;
  CHECK(theta == doctest::Approx(std::atan(110.0 / 101.98)).epsilon(2e-3));
}

TEST_CASE("failed records are reported and kept") {
  Experiment e = make_preset("py-sweep");
  e.values = {SweepValue{126.8e-6}, SweepValue{500e-6}};  // second lands on ground
  e.analyses = {AnalysisKind::null_point};
  RunOptions opt;
  opt.write_files = false;
  const RunResult r = run_experiment(e, opt);

  CHECK(r.exit_code == 3);
  REQUIRE(r.records.size() == 2);
  CHECK(!r.records[0].failed);
  REQUIRE(r.records[0].null_point.has_value());
  CHECK(r.records[1].failed);
  CHECK(!r.records[1].notes.empty());
  REQUIRE(r.failures.size() == 1);

  // Both rows are present in the CSV; the failed one keeps its notes.
  const std::string csv = records_to_csv(e, r.records);
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);  // header + 2 records
}

TEST_CASE("benign per-component peak notes do not fail the run") {
  Experiment e = make_preset("reference-axial");
  RunOptions opt;
  opt.write_files = false;
  opt.resolution = 0.25;
  const RunResult r = run_experiment(e, opt);

  CHECK(r.exit_code == 0);
  REQUIRE(r.records.size() == 1);
  const ResultRecord& rec = r.records[0];
  CHECK(!rec.failed);
  // On the symmetry axis Ey vanishes identically, so its peak metrics
  // cannot exist; that is a note, not a failure.
  CHECK(!rec.ey.has_value());
  bool noted = false;
  for (const auto& n : rec.notes)
    if (n.find("ey") != std::string::npos) noted = true;
  CHECK(noted);

  REQUIRE(rec.scan.has_value());
  CHECK(rec.scan->z.size() == 501);  // 2001 scaled by resolution 0.25
  REQUIRE(rec.modes.has_value());
  CHECK(rec.modes->frequency[1] == doctest::Approx(1.838e6).epsilon(5e-3));
  REQUIRE(rec.depth.has_value());
  CHECK(rec.depth->depth_ev == doctest::Approx(95.5e-3).epsilon(2e-2));
  REQUIRE(rec.q.has_value());
  CHECK(rec.q->q == doctest::Approx(0.3249).epsilon(5e-3));
}

TEST_CASE("file outputs and manifest") {
  TempDir tmp;
  Experiment e = make_preset("reference-axial");
  RunOptions opt;
  opt.out_dir = tmp.path.string();
  opt.resolution = 0.25;
  const RunResult r = run_experiment(e, opt);
  REQUIRE(r.exit_code == 0);

  REQUIRE(!r.csv_path.empty());
  CHECK(fs::exists(r.csv_path));
  REQUIRE(!r.json_path.empty());
  CHECK(fs::exists(r.json_path));
  REQUIRE(r.scan_paths.size() == 1);
  CHECK(fs::exists(r.scan_paths[0]));

  // Scan CSV carries the complex field per component.
  std::ifstream sf(r.scan_paths[0]);
  std::string sheader;
  REQUIRE(std::getline(sf, sheader));
  CHECK(sheader.rfind("z_um,", 0) == 0);
  CHECK(sheader.find("ex_re") != std::string::npos);
  CHECK(sheader.find("ez_abs") != std::string::npos);

  // Manifest: machine-readable run description.
  std::ifstream jf(r.json_path);
  const nlohmann::json j = nlohmann::json::parse(jf);
  CHECK(j.at("experiment").get<std::string>() == "reference-axial");
  CHECK(j.at("sweep").at("count").get<int>() == 1);
  CHECK(!j.at("code_version").get<std::string>().empty());
  CHECK(j.at("units").is_object());
  CHECK(!j.at("units").empty());
  CHECK(j.at("outputs").at("scans").size() == 1);
  CHECK(j.at("failures").empty());
  CHECK(j.at("workers").get<int>() >= 1);
}

TEST_CASE("json records mode replaces the csv") {
  TempDir tmp;
  Experiment e = make_preset("gap-crossing");
  e.values = {SweepValue{40e-6}};
  RunOptions opt;
  opt.out_dir = tmp.path.string();
  opt.json_records = true;
  const RunResult r = run_experiment(e, opt);
  REQUIRE(r.exit_code == 0);
  CHECK(r.csv_path.empty());
  std::ifstream jf(r.json_path);
  const nlohmann::json j = nlohmann::json::parse(jf);
  REQUIRE(j.contains("records"));
  CHECK(j.at("records").size() == 1);
  CHECK(j.at("records")[0].contains("null_point"));
}

TEST_CASE("code version is exposed") {
  CHECK(!std::string(code_version()).empty());
}

#ifdef SURFTRAP_CLI_PATH
TEST_CASE("cli exit codes") {
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("preset --list") == 0);
  CHECK(run_cli("grating --preset si3n4-760") == 0);
  CHECK(run_cli("run /nonexistent/config.yaml") == 2);
  CHECK(run_cli("preset no-such-preset") == 2);

  TempDir tmp;
  const fs::path bad = tmp.path / "bad.yaml";
  std::ofstream(bad) << "layout: reference\napertures: [{p_y: 0, w_a: 4}]\n";
  CHECK(run_cli("run " + bad.string()) == 2);

  const fs::path good = tmp.path / "good.yaml";
  std::ofstream(good) << "name: cli-quick\n"
                         "apertures: [{p_y: 126.8, w_a: 30}]\n"
                         "analyses: [null-point]\n"
                         "output: {csv: q.csv}\n";
  CHECK(run_cli("run " + good.string() + " --out-dir " + tmp.path.string()) == 0);
  CHECK(fs::exists(tmp.path / "q.csv"));
}
#endif

}  // TEST_SUITE
