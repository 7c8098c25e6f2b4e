#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "idqa/analysis.hpp"
#include "idqa/dynamics.hpp"
#include "idqa/io.hpp"

namespace idqa {

/// Everything a CLI invocation needs. Times ending in `_us` are physical
/// microseconds and are converted with `dynamics.time_scale`.
struct RunConfig {
  std::string model = "signature";
  std::string curves = "linear";

  double tau_anneal_us = 1.0;
  double tau_pause_us = 1.0;
  /// 0 runs the plain anneal without a pause.
  double s_pause = 0.46;

  std::vector<double> sweep_grid = default_pause_grid();
  std::vector<std::pair<double, double>> sweep_taus_us = {{1, 1}, {2, 2}, {5, 5}, {10, 10}};

  DynamicsParams dynamics{};

  std::filesystem::path output_dir = "idqa-out";
  int workers = 1;
  /// Only used to generate synthetic test data; the simulator is deterministic.
  std::uint64_t seed = 0;
  bool timestamp = true;

  /// Snapshot spacing written by `run`, in dimensionless time units.
  double snapshot_interval = 1.0;
  bool export_amplitudes = false;
  /// Moving-average window for group series, in microseconds (20 ns).
  double smoothing_window_us = 0.02;

  std::size_t spectrum_k = 20;
  double spectrum_step = 0.002;

  std::string codegen_target = "c";
  std::filesystem::path codegen_output = "rhs.c";

  /// Throws ValidationError describing the first bad field. Referenced
  /// model and curve files must exist.
  void validate() const;

  double to_time_units(double microseconds) const { return microseconds * dynamics.time_scale; }
};

/// Reads a JSON config; unknown keys are rejected.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text);

struct SingleRunResult {
  RatioResult final_ratio;
  double total_time = 0.0;
  double max_norm_drift = 0.0;
  std::vector<std::filesystem::path> outputs;
};

/// Integrates one schedule and writes trajectory.csv, ratio_series.csv,
/// groups.csv, groups_path.csv, groups_smoothed.csv and summary.json into
/// the output directory. On a numerical failure the snapshots gathered so
/// far are written with status "partial" and the error is rethrown.
SingleRunResult run_single(const RunConfig& config);

/// Writes sweep.csv: one ratio_sweep block per (tau_anneal, tau_pause)
/// setting, in configuration order. Row taus are in microseconds.
std::vector<SweepRow> run_sweep(const RunConfig& config);

/// Writes gaps.csv over s = 0, step, ..., 1.
std::vector<io::GapRow> run_spectrum(const RunConfig& config);

/// Writes the generated right-hand side to config.codegen_output.
std::string run_codegen(const RunConfig& config);

}  // namespace idqa
