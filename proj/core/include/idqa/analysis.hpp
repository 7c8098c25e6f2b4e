#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "idqa/dynamics.hpp"
#include "idqa/ising.hpp"
#include "idqa/schedule.hpp"
#include "idqa/spectral.hpp"

namespace idqa {

/// Degenerate classical ground states split into the clustered set C and the
/// isolated state S.
struct GroundStatePartition {
  std::vector<BasisIndex> clustered;
  BasisIndex isolated;
};

/// C = core spins all up, S = all spins down. Throws ValidationError unless
/// every member is a classical ground state of `model`.
GroundStatePartition signature_partition(const IsingModel& model,
                                         int core_spins = kSignatureCoreSpins);

/// Grouping by core magnetization m = (sum of core sigma^z) / 2.
enum class GroupLabel { CL, E1, E2, E3, ISO, OTHER };
inline constexpr std::size_t kGroupCount = 6;

std::string_view to_string(GroupLabel label);

/// CL, E1, E2, E3, ISO for m = 2, 1, 0, -1, -2; OTHER otherwise.
GroupLabel group_label(BasisIndex state, int core_spins = kSignatureCoreSpins);

inline constexpr double kInfiniteRatio = std::numeric_limits<double>::infinity();

struct RatioResult {
  double ps = 0.0;
  double pc = 0.0;
  /// P_s / P_c, kInfiniteRatio when P_c = 0.
  double ratio = 0.0;
};

RatioResult ps_pc(const StateVector& state, const GroundStatePartition& partition);

struct SweepRow {
  double tau_anneal = 0.0;
  double tau_pause = 0.0;
  /// 0 marks the no-pause baseline.
  double s_pause = 0.0;
  double ps = 0.0;
  double pc = 0.0;
  double ratio = 0.0;
  double final_norm = 0.0;
  std::string status = "ok";
};

/// One integration per s_pause plus the no-pause baseline (s_pause = 0).
/// Rows are ordered baseline first, then by the order of `s_pause_list`.
/// A zero entry in the list is the baseline; an empty list gives no rows.
/// Failed integrations are reported in the row status, not thrown.
/// Times are in dimensionless units.
std::vector<SweepRow> ratio_sweep(const IsingModel& model, const ScheduleCurves& curves,
                                  const DynamicsParams& params, double tau_anneal,
                                  double tau_pause, const std::vector<double>& s_pause_list,
                                  const GroundStatePartition& partition, int workers = 1);

/// The 49 values 0.02, 0.04, ..., 0.98.
std::vector<double> default_pause_grid();

/// p_i(t2) - p_i(t1) in the z-basis, using the snapshots nearest t1 and t2.
std::vector<double> probability_change(const Trajectory& traj, double t1, double t2);

/// Same in the eigenbasis of `eigsys`.
std::vector<double> probability_change(const Trajectory& traj, const EigenSystem& eigsys,
                                       double t1, double t2);

struct GroupSeries {
  std::vector<double> times;
  /// Indexed by static_cast<std::size_t>(GroupLabel).
  std::vector<std::array<double, kGroupCount>> values;
};

/// Per snapshot, total probability of each core-magnetization group. With
/// `path_only`, E1, E2 and E3 keep only states whose outer spins are all down.
GroupSeries group_probabilities(const Trajectory& traj, bool path_only = false,
                                int core_spins = kSignatureCoreSpins);

struct BridgeState {
  std::size_t index = 0;
  /// |<z|v>|^2 over every z-basis state.
  std::vector<double> profile;
  double clustered_peak = 0.0;
  double isolated_peak = 0.0;
};

/// Eigenstates among the lowest `max_states` whose z-basis weight exceeds
/// `threshold` on at least one clustered-side state (C or E1) and at least
/// one isolated-side state (S, E3 or ISO).
std::vector<BridgeState> bridge_state_finder(const EigenSystem& eigsys,
                                             const GroundStatePartition& partition,
                                             double threshold,
                                             std::size_t max_states = 20,
                                             int core_spins = kSignatureCoreSpins);

/// Centered moving average over the half-open window [t - w/2, t + w/2),
/// truncated at the ends of the series.
std::vector<double> moving_average(const std::vector<double>& times,
                                   const std::vector<double>& values, double window);

struct OutlierFilterResult {
  std::vector<double> kept;
  std::vector<std::size_t> rejected;
  double median = 0.0;
  double mad = 0.0;
};

/// Drops values with |v - median| > k * MAD. When the MAD is zero only
/// values equal to the median survive, and a warning is issued if any are
/// dropped.
OutlierFilterResult mad_outlier_filter(const std::vector<double>& values, double k = 6.0);

}  // namespace idqa
