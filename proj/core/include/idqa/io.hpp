#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "idqa/analysis.hpp"
#include "idqa/dynamics.hpp"
#include "idqa/ising.hpp"
#include "idqa/schedule.hpp"

namespace idqa::io {

// Model file (JSON):
//   { "spins": 8,
//     "couplings": [[i, j, J], ...],
//     "fields": [h_0, ..., h_{n-1}],          optional, default 0
//     "transverse": [G_0, ..., G_{n-1}] }     optional, default 1
IsingModel parse_model(const std::string& text);
IsingModel load_model(const std::filesystem::path& path);
std::string format_model(const IsingModel& model);

/// "signature" selects the built-in preset; anything else is a model file path.
IsingModel resolve_model(const std::string& source);

// Schedule-curve file: three numeric columns s, A, B separated by whitespace
// or commas, rows sorted by s. A non-numeric first line is a header; lines
// starting with '#' are comments.
ScheduleCurves parse_curves(const std::string& text);
ScheduleCurves load_curves(const std::filesystem::path& path);

/// "linear" selects A = 1 - s, B = s; anything else is a curve file path.
ScheduleCurves resolve_curves(const std::string& source);

/// Shortest round-trip decimal; "inf" and "nan" for non-finite values.
std::string format_number(double v);

struct ExportOptions {
  /// Prepend "# generated <UTC time>". Off for byte-reproducible output.
  bool timestamp = true;
};

void write_preamble(std::ostream& os, const ExportOptions& opts);

struct TrajectoryColumns {
  /// re_0, im_0, re_1, ... after the fixed columns.
  bool amplitudes = false;
  /// P_s, P_c, ratio after the fixed columns (needs a partition).
  std::optional<GroundStatePartition> partition;
};

/// Columns: t, s, A, B, norm, then the optional blocks in the order above.
/// `norm` is |c|^2 before renormalization.
void write_trajectory(std::ostream& os, const Trajectory& traj, const TrajectoryColumns& cols,
                      const ExportOptions& opts);

/// Columns: t, P_s, P_c, ratio.
void write_ratio_series(std::ostream& os, const Trajectory& traj,
                        const GroundStatePartition& partition, const ExportOptions& opts);

/// Columns: tau_anneal, tau_pause, s_pause, P_s, P_c, ratio, final_norm, status.
void write_sweep_header(std::ostream& os, const ExportOptions& opts);
void write_sweep_rows(std::ostream& os, const std::vector<SweepRow>& rows);

/// Columns: t, CL, E1, E2, E3, ISO.
void write_group_series(std::ostream& os, const GroupSeries& series, const ExportOptions& opts);

struct GapRow {
  double s = 0.0;
  std::vector<double> gaps;
};

/// Columns: s, gap_1, ..., gap_k.
void write_gap_curve(std::ostream& os, const std::vector<GapRow>& rows, std::size_t k,
                     const ExportOptions& opts);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace idqa::io
