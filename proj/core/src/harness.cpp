#include "idqa/harness.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "idqa/codegen.hpp"
#include "idqa/errors.hpp"
#include "idqa/spectral.hpp"
#include "json.hpp"

namespace idqa {
namespace {

void require_source(const std::string& source, const char* preset, const char* what) {
  if (source == preset) return;
  if (!std::filesystem::exists(source)) {
    throw ValidationError(std::string(what) + " file not found: " + source);
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

}  // namespace

void RunConfig::validate() const {
  require_source(model, "signature", "model");
  require_source(curves, "linear", "schedule-curve");
  dynamics.validate();
  if (!(tau_anneal_us > 0.0)) throw ValidationError("tau_anneal must be positive");
  if (!(tau_pause_us >= 0.0)) throw ValidationError("tau_pause must be non-negative");
  if (!(s_pause >= 0.0 && s_pause < 1.0)) {
    throw ValidationError("s_pause must lie in (0, 1), or be 0 for no pause");
  }
  for (double s : sweep_grid) {
    if (!(s >= 0.0 && s < 1.0)) throw ValidationError("sweep grid values must lie in (0, 1)");
  }
  for (const auto& [a, p] : sweep_taus_us) {
    if (!(a > 0.0) || !(p >= 0.0)) throw ValidationError("sweep anneal/pause times out of range");
  }
  if (workers < 1) throw ValidationError("worker count must be at least 1");
  if (!(snapshot_interval > 0.0)) throw ValidationError("snapshot interval must be positive");
  if (!(smoothing_window_us > 0.0)) throw ValidationError("smoothing window must be positive");
  if (spectrum_k < 1) throw ValidationError("spectrum k must be at least 1");
  if (!(spectrum_step > 0.0 && spectrum_step <= 1.0)) {
    throw ValidationError("spectrum step must lie in (0, 1]");
  }
  codegen::parse_target(codegen_target);
}

RunConfig parse_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known = {
      "model", "curves", "tau_anneal_us", "tau_pause_us", "s_pause", "sweep_grid",
      "sweep_taus_us", "alpha", "temperature", "time_scale", "reg_floor", "atol", "rtol",
      "output_step", "max_steps", "bare_energies", "output_dir", "workers", "seed",
      "timestamp", "snapshot_interval", "export_amplitudes", "smoothing_window_us",
      "spectrum_k", "spectrum_step", "codegen_target", "codegen_output"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  RunConfig c;
  try {
    c.model = doc.value("model", c.model);
    c.curves = doc.value("curves", c.curves);
    c.tau_anneal_us = doc.value("tau_anneal_us", c.tau_anneal_us);
    c.tau_pause_us = doc.value("tau_pause_us", c.tau_pause_us);
    c.s_pause = doc.value("s_pause", c.s_pause);
    c.sweep_grid = doc.value("sweep_grid", c.sweep_grid);
    if (doc.contains("sweep_taus_us")) {
      c.sweep_taus_us.clear();
      for (const auto& pair : doc.at("sweep_taus_us")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw ValidationError("sweep_taus_us entries must be [anneal, pause] pairs");
        }
        c.sweep_taus_us.emplace_back(pair[0].get<double>(), pair[1].get<double>());
      }
    }
    auto& d = c.dynamics;
    d.alpha = doc.value("alpha", d.alpha);
    d.temperature = doc.value("temperature", d.temperature);
    d.time_scale = doc.value("time_scale", d.time_scale);
    d.reg_floor = doc.value("reg_floor", d.reg_floor);
    d.atol = doc.value("atol", d.atol);
    d.rtol = doc.value("rtol", d.rtol);
    d.output_step = doc.value("output_step", d.output_step);
    d.max_steps = doc.value("max_steps", d.max_steps);
    d.bare_energies = doc.value("bare_energies", d.bare_energies);
    c.output_dir = doc.value("output_dir", c.output_dir.string());
    c.workers = doc.value("workers", c.workers);
    c.seed = doc.value("seed", c.seed);
    c.timestamp = doc.value("timestamp", c.timestamp);
    c.snapshot_interval = doc.value("snapshot_interval", c.snapshot_interval);
    c.export_amplitudes = doc.value("export_amplitudes", c.export_amplitudes);
    c.smoothing_window_us = doc.value("smoothing_window_us", c.smoothing_window_us);
    c.spectrum_k = doc.value("spectrum_k", c.spectrum_k);
    c.spectrum_step = doc.value("spectrum_step", c.spectrum_step);
    c.codegen_target = doc.value("codegen_target", c.codegen_target);
    c.codegen_output = doc.value("codegen_output", c.codegen_output.string());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SingleRunResult run_single(const RunConfig& config) {
  config.validate();
  const auto model = io::resolve_model(config.model);
  const auto curves = io::resolve_curves(config.curves);
  std::optional<GroundStatePartition> partition;
  try {
    partition = signature_partition(model);
  } catch (const ValidationError& e) {
    warn(std::string("run: skipping P_s/P_c outputs: ") + e.what());
  }
  const double tau_a = config.to_time_units(config.tau_anneal_us);
  const double tau_p = config.to_time_units(config.tau_pause_us);
  const AnnealPath path = config.s_pause == 0.0 ? AnnealPath::linear(tau_a)
                                                : make_pause_path(tau_a, tau_p, config.s_pause);
  const ControlSchedule schedule(path, curves);

  DynamicsParams params = config.dynamics;
  params.snapshot_every = std::max(
      1, static_cast<int>(std::lround(config.snapshot_interval / params.output_step)));

  // Snapshots are mirrored here so a failed run can still be exported.
  Trajectory partial{model, schedule, params, {}, {}, {}, {}, 0.0, 0};
  auto observer = [&](double t, const Controls& c, const StateVector& s) {
    partial.times.push_back(t);
    partial.controls.push_back(c);
    partial.states.push_back(s);
    partial.norms.push_back(norm_squared(s.amplitudes()));
  };

  std::filesystem::create_directories(config.output_dir);
  const io::ExportOptions opts{config.timestamp};
  SingleRunResult result;
  std::string status = "ok";
  std::string error;
  try {
    auto traj = integrate(model, schedule, params, std::nullopt, observer);
    result.max_norm_drift = traj.max_norm_drift;
    partial = std::move(traj);
  } catch (const NumericalError& e) {
    status = "partial";
    error = e.what();
  }

  const auto& dir = config.output_dir;
  auto emit = [&](const char* name, auto&& writer) {
    const auto p = dir / name;
    auto out = open_output(p);
    writer(out);
    result.outputs.push_back(p);
  };
  io::TrajectoryColumns cols;
  cols.amplitudes = config.export_amplitudes;
  cols.partition = partition;
  emit("trajectory.csv", [&](std::ostream& os) { io::write_trajectory(os, partial, cols, opts); });
  if (partition) {
    emit("ratio_series.csv", [&](std::ostream& os) { io::write_ratio_series(os, partial, *partition, opts); });
  }
  if (!partial.states.empty() && model.spin_count() >= kSignatureCoreSpins) {
    const auto groups = group_probabilities(partial, false);
    emit("groups.csv", [&](std::ostream& os) { io::write_group_series(os, groups, opts); });
    emit("groups_path.csv", [&](std::ostream& os) {
      io::write_group_series(os, group_probabilities(partial, true), opts);
    });
    GroupSeries smoothed = groups;
    const double window = config.to_time_units(config.smoothing_window_us);
    for (std::size_t g = 0; g < 5; ++g) {
      std::vector<double> col(groups.times.size());
      for (std::size_t k = 0; k < col.size(); ++k) col[k] = groups.values[k][g];
      const auto avg = moving_average(groups.times, col, window);
      for (std::size_t k = 0; k < col.size(); ++k) smoothed.values[k][g] = avg[k];
    }
    emit("groups_smoothed.csv", [&](std::ostream& os) { io::write_group_series(os, smoothed, opts); });
  }
  if (partition && !partial.states.empty()) result.final_ratio = ps_pc(partial.states.back(), *partition);
  result.total_time = schedule.total_time();

  nlohmann::json summary;
  summary["status"] = status;
  if (!error.empty()) summary["error"] = error;
  summary["total_time"] = result.total_time;
  summary["snapshots"] = partial.size();
  summary["P_s"] = result.final_ratio.ps;
  summary["P_c"] = result.final_ratio.pc;
  summary["ratio"] = std::isfinite(result.final_ratio.ratio) ? nlohmann::json(result.final_ratio.ratio)
                                                             : nlohmann::json("inf");
  summary["max_norm_drift"] = result.max_norm_drift;
  emit("summary.json", [&](std::ostream& os) { os << summary.dump(2) << '\n'; });

  if (status != "ok") throw NumericalError(error);
  return result;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  config.validate();
  const auto model = io::resolve_model(config.model);
  const auto curves = io::resolve_curves(config.curves);
  const auto partition = signature_partition(model);
  std::vector<SweepRow> all;
  for (const auto& [a, p] : config.sweep_taus_us) {
    auto rows = ratio_sweep(model, curves, config.dynamics, config.to_time_units(a),
                            config.to_time_units(p), config.sweep_grid, partition, config.workers);
    // Report the settings in microseconds, as configured.
    for (auto& r : rows) {
      r.tau_anneal = a;
      r.tau_pause = p;
    }
    all.insert(all.end(), rows.begin(), rows.end());
  }
  std::filesystem::create_directories(config.output_dir);
  auto out = open_output(config.output_dir / "sweep.csv");
  io::write_sweep_header(out, {config.timestamp});
  io::write_sweep_rows(out, all);
  return all;
}

std::vector<io::GapRow> run_spectrum(const RunConfig& config) {
  config.validate();
  const auto model = io::resolve_model(config.model);
  const auto curves = io::resolve_curves(config.curves);
  if (config.spectrum_k >= model.dimension()) {
    throw ValidationError("spectrum k must be below the Hilbert-space dimension");
  }
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / config.spectrum_step));
  if (std::abs(static_cast<double>(steps) * config.spectrum_step - 1.0) > 1e-9) {
    throw ValidationError("spectrum step must divide 1");
  }
  std::vector<io::GapRow> rows;
  rows.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(steps);
    const auto eig = eigensystem(model, curves, s);
    rows.push_back({s, gaps(eig, config.spectrum_k)});
  }
  std::filesystem::create_directories(config.output_dir);
  auto out = open_output(config.output_dir / "gaps.csv");
  io::write_gap_curve(out, rows, config.spectrum_k, {config.timestamp});
  return rows;
}

std::string run_codegen(const RunConfig& config) {
  config.validate();
  const auto model = io::resolve_model(config.model);
  const auto program = codegen::generate_rhs_program(model, config.dynamics.bare_energies);
  const auto text = codegen::emit(program, codegen::parse_target(config.codegen_target));
  io::write_text_file(config.codegen_output, text);
  return text;
}

}  // namespace idqa
