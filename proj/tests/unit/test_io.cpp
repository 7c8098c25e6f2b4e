#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "idqa/harness.hpp"
#include "idqa/io.hpp"
#include "json.hpp"

using namespace idqa;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Small fast configuration: 1 us maps to 2 time units.
RunConfig quick_config(const fs::path& out) {
  RunConfig c;
  c.output_dir = out;
  c.timestamp = false;
  c.dynamics.time_scale = 2.0;
  c.snapshot_interval = 0.1;
  c.smoothing_window_us = 0.1;
  return c;
}

}  // namespace

TEST_CASE("model JSON round trip") {
  const auto sig = build_quantum_signature();
  const auto back = io::parse_model(io::format_model(sig));
  CHECK(back.spin_count() == 8);
  CHECK(back.fields() == sig.fields());
  CHECK(back.couplings().size() == sig.couplings().size());
  CHECK(diagonal_energies(back) == diagonal_energies(sig));

  const auto m = io::parse_model(R"({"spins": 2, "couplings": [[0, 1, -0.5]], "fields": [0.1, 0.2]})");
  CHECK(m.couplings()[0].strength == -0.5);
  CHECK(m.transverse() == std::vector<double>{1.0, 1.0});
  CHECK_THROWS_AS(io::parse_model("{"), ValidationError);
  CHECK_THROWS_AS(io::parse_model(R"({"spins": 2, "couplings": [[0, 5, 1]]})"), ValidationError);
  CHECK_THROWS_AS(io::parse_model(R"({"spins": 2, "bogus": 1})"), ValidationError);
  CHECK(io::resolve_model("signature").spin_count() == 8);
  CHECK_THROWS_AS(io::resolve_model("/nonexistent/model.json"), ValidationError);
}

TEST_CASE("curve table parsing") {
  const auto c = io::parse_curves("# device table\ns,A,B\n0,1,0\n0.5,0.3,0.6\n1,0,1\n");
  CHECK(c.samples().size() == 3);
  CHECK(eval_curves(c, 0.25).A == doctest::Approx(0.65));
  const auto ws = io::parse_curves("0 1 0\n1 0 1\n");
  CHECK(eval_curves(ws, 0.5).B == doctest::Approx(0.5));
  CHECK_THROWS_AS(io::parse_curves("0,1\n1,0,1\n"), ValidationError);
  CHECK_THROWS_AS(io::parse_curves("0,1,0\n0.5,x,0.5\n1,0,1\n"), ValidationError);
  CHECK(io::resolve_curves("linear").samples().size() == 2);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0238}) CHECK(std::stod(io::format_number(v)) == v);
  CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({"alpha": 0.01, "sweep_taus_us": [[1, 1], [2, 2]], "s_pause": 0.5})");
  CHECK(c.dynamics.alpha == 0.01);
  CHECK(c.sweep_taus_us.size() == 2);
  CHECK(c.s_pause == 0.5);
  CHECK_THROWS_AS(parse_config(R"({"alhpa": 0.01})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"alpha": "big"})"), ValidationError);
  CHECK_THROWS_AS(parse_config("[1]"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"sweep_taus_us": [[1]]})"), ValidationError);

  RunConfig bad;
  bad.s_pause = 1.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = RunConfig{};
  bad.spectrum_k = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = RunConfig{};
  bad.codegen_target = "fortran";
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = RunConfig{};
  bad.model = "/nonexistent.json";
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("run_single writes the documented outputs") {
  TempDir tmp("idqa_run_single");
  auto c = quick_config(tmp.path);
  c.export_amplitudes = true;
  const auto res = run_single(c);
  CHECK(res.total_time == doctest::Approx(4.0));
  CHECK(res.max_norm_drift < 1e-6);
  for (const char* f : {"trajectory.csv", "ratio_series.csv", "groups.csv", "groups_path.csv",
                        "groups_smoothed.csv", "summary.json"}) {
    CHECK(fs::exists(tmp.path / f));
  }
  const auto traj = lines(slurp(tmp.path / "trajectory.csv"));
  REQUIRE(traj.size() == 42);  // header + t = 0, 0.1, ..., 4
  CHECK(traj[0].rfind("t,s,A,B,norm,P_s,P_c,ratio,re_0,im_0", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(tmp.path / "summary.json"));
  CHECK(summary["status"] == "ok");
  CHECK(summary["ratio"].get<double>() == doctest::Approx(res.final_ratio.ratio));
  CHECK(lines(slurp(tmp.path / "groups.csv"))[0] == "t,CL,E1,E2,E3,ISO");
}

TEST_CASE("run_single with timestamp writes a preamble") {
  TempDir tmp("idqa_run_stamp");
  auto c = quick_config(tmp.path);
  c.timestamp = true;
  c.tau_pause_us = 0.0;
  run_single(c);
  CHECK(slurp(tmp.path / "ratio_series.csv").rfind("# generated ", 0) == 0);
}

TEST_CASE("run_single marks partial output on numerical failure") {
  TempDir tmp("idqa_run_partial");
  auto c = quick_config(tmp.path);
  c.dynamics.max_steps = 1;
  c.dynamics.atol = c.dynamics.rtol = 1e-15;
  CHECK_THROWS_AS(run_single(c), NumericalError);
  const auto summary = nlohmann::json::parse(slurp(tmp.path / "summary.json"));
  CHECK(summary["status"] == "partial");
  CHECK(summary.contains("error"));
}

TEST_CASE("run_single rejects invalid configs before writing") {
  TempDir tmp("idqa_run_invalid");
  auto c = quick_config(tmp.path / "out");
  c.s_pause = 1.5;
  CHECK_THROWS_AS(run_single(c), ValidationError);
  CHECK_FALSE(fs::exists(tmp.path / "out"));
}

TEST_CASE("run_single on a non-signature model skips ratio outputs") {
  TempDir tmp("idqa_run_custom");
  std::ofstream(tmp.path / "m.json") << R"({"spins": 2, "couplings": [[0, 1, 1]], "fields": [0, 0]})";
  auto c = quick_config(tmp.path / "out");
  c.model = (tmp.path / "m.json").string();
  testing::WarningCapture warnings;
  run_single(c);
  CHECK(fs::exists(tmp.path / "out" / "trajectory.csv"));
  CHECK_FALSE(fs::exists(tmp.path / "out" / "ratio_series.csv"));
  CHECK_FALSE(warnings.messages.empty());
}

TEST_CASE("run_sweep table") {
  TempDir tmp("idqa_sweep");
  auto c = quick_config(tmp.path);
  c.dynamics.time_scale = 0.5;
  c.sweep_grid = {0.2, 0.5};
  c.sweep_taus_us = {{1, 1}, {2, 2}};
  const auto rows = run_sweep(c);
  CHECK(rows.size() == 6);
  const auto table = lines(slurp(tmp.path / "sweep.csv"));
  REQUIRE(table.size() == 7);
  CHECK(table[0] == "tau_anneal,tau_pause,s_pause,P_s,P_c,ratio,final_norm,status");
  CHECK(table[1].rfind("1,1,0,", 0) == 0);  // baseline row of the 1+1 us block

  c.sweep_grid.clear();
  CHECK(run_sweep(c).empty());
  CHECK(lines(slurp(tmp.path / "sweep.csv")).size() == 1);
}

TEST_CASE("full sweep shape: four settings x 50 rows") {
  TempDir tmp("idqa_sweep_full");
  auto c = quick_config(tmp.path);
  c.dynamics.time_scale = 0.05;
  CHECK(run_sweep(c).size() == 200);
}

TEST_CASE("run_spectrum") {
  TempDir tmp("idqa_spectrum");
  auto c = quick_config(tmp.path);
  c.spectrum_step = 0.125;
  c.spectrum_k = 20;
  const auto rows = run_spectrum(c);
  REQUIRE(rows.size() == 9);
  for (std::size_t a = 0; a < 16; ++a) CHECK(rows.back().gaps[a] <= 1e-9);
  const auto table = lines(slurp(tmp.path / "gaps.csv"));
  REQUIRE(table.size() == 10);
  CHECK(std::count(table[0].begin(), table[0].end(), ',') == 20);
  c.spectrum_step = 0.3;
  CHECK_THROWS_AS(run_spectrum(c), ValidationError);
}

TEST_CASE("run_codegen") {
  TempDir tmp("idqa_codegen");
  auto c = quick_config(tmp.path);
  c.codegen_target = "exprlist";
  c.codegen_output = tmp.path / "rhs.txt";
  const auto text = run_codegen(c);
  CHECK(slurp(tmp.path / "rhs.txt") == text);
  CHECK(std::count(text.begin(), text.end(), '\n') > 256);
}
