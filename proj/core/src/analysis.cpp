#include "idqa/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "idqa/errors.hpp"

namespace idqa {

GroundStatePartition signature_partition(const IsingModel& model, int core_spins) {
  if (core_spins < 1 || core_spins > model.spin_count()) {
    throw ValidationError("core spin count must lie in [1, n]");
  }
  GroundStatePartition part;
  const std::uint32_t core_mask = (1U << core_spins) - 1U;
  for (std::uint32_t i = 0; i < model.dimension(); ++i) {
    if ((i & core_mask) == core_mask) part.clustered.emplace_back(i);
  }
  part.isolated = BasisIndex(0);
  const auto spectrum = classical_spectrum(model, IsingModel::kMaxSpins);
  auto is_ground = [&](BasisIndex b) {
    return std::abs(spectrum.energies[b.value] - spectrum.ground_energy) <= kGroundEnergyTolerance;
  };
  if (!is_ground(part.isolated) || !std::all_of(part.clustered.begin(), part.clustered.end(), is_ground)) {
    throw ValidationError("model ground states do not match the clustered/isolated partition");
  }
  return part;
}

std::string_view to_string(GroupLabel label) {
  switch (label) {
    case GroupLabel::CL: return "CL";
    case GroupLabel::E1: return "E1";
    case GroupLabel::E2: return "E2";
    case GroupLabel::E3: return "E3";
    case GroupLabel::ISO: return "ISO";
    case GroupLabel::OTHER: break;
  }
  return "OTHER";
}

GroupLabel group_label(BasisIndex state, int core_spins) {
  int sum = 0;
  for (int b = 0; b < core_spins; ++b) sum += state.spin(b);
  // sum = 2m
  switch (sum) {
    case 4: return GroupLabel::CL;
    case 2: return GroupLabel::E1;
    case 0: return GroupLabel::E2;
    case -2: return GroupLabel::E3;
    case -4: return GroupLabel::ISO;
    default: return GroupLabel::OTHER;
  }
}

RatioResult ps_pc(const StateVector& state, const GroundStatePartition& partition) {
  if (partition.clustered.empty()) throw ValidationError("clustered set is empty");
  RatioResult r;
  for (auto b : partition.clustered) r.pc += std::norm(state[b.value]);
  r.pc /= static_cast<double>(partition.clustered.size());
  r.ps = std::norm(state[partition.isolated.value]);
  r.ratio = r.pc > 0.0 ? r.ps / r.pc : kInfiniteRatio;
  return r;
}

std::vector<double> default_pause_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 49; ++k) grid.push_back(0.02 * k);
  return grid;
}

std::vector<SweepRow> ratio_sweep(const IsingModel& model, const ScheduleCurves& curves,
                                  const DynamicsParams& params, double tau_anneal,
                                  double tau_pause, const std::vector<double>& s_pause_list,
                                  const GroundStatePartition& partition, int workers) {
  if (!(tau_anneal > 0.0)) throw ValidationError("tau_anneal must be positive");
  if (!(tau_pause >= 0.0)) throw ValidationError("tau_pause must be non-negative");
  for (double s : s_pause_list) {
    if (!(s >= 0.0 && s < 1.0)) {
      throw ValidationError("s_pause values must lie in (0, 1) or be 0 for the baseline");
    }
  }
  params.validate();
  std::vector<SweepRow> rows;
  if (s_pause_list.empty()) return rows;
  rows.push_back({tau_anneal, tau_pause, 0.0});
  for (double s : s_pause_list) {
    if (s != 0.0) rows.push_back({tau_anneal, tau_pause, s});
  }

  DynamicsParams run_params = params;
  run_params.snapshot_every = std::numeric_limits<int>::max();

  auto run_row = [&](SweepRow& row) {
    try {
      const AnnealPath path = row.s_pause == 0.0 ? AnnealPath::linear(tau_anneal)
                                                 : make_pause_path(tau_anneal, tau_pause, row.s_pause);
      const auto traj = integrate(model, ControlSchedule(path, curves), run_params);
      const auto r = ps_pc(traj.states.back(), partition);
      row.ps = r.ps;
      row.pc = r.pc;
      row.ratio = r.ratio;
      row.final_norm = traj.norms.back();
    } catch (const std::exception& e) {
      row.status = std::string("failed: ") + e.what();
      std::replace(row.status.begin(), row.status.end(), ',', ';');
      row.ps = row.pc = row.ratio = row.final_norm = std::nan("");
    }
  };

  const auto count = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                              rows.size());
  if (count == 1) {
    for (auto& row : rows) run_row(row);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < rows.size(); k = next++) run_row(rows[k]);
    });
  }
  pool.clear();
  return rows;
}

namespace {

void check_window(const Trajectory& traj, double t1, double t2) {
  if (t1 > t2) throw ValidationError("probability change requires t1 <= t2");
  traj.index_at(t1);
  traj.index_at(t2);
}

}  // namespace

std::vector<double> probability_change(const Trajectory& traj, double t1, double t2) {
  check_window(traj, t1, t2);
  const auto p1 = traj.states[traj.index_at(t1)].probabilities();
  const auto p2 = traj.states[traj.index_at(t2)].probabilities();
  std::vector<double> delta(p1.size());
  for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = p2[i] - p1[i];
  return delta;
}

std::vector<double> probability_change(const Trajectory& traj, const EigenSystem& eigsys,
                                       double t1, double t2) {
  check_window(traj, t1, t2);
  const auto p1 = eigen_overlaps(traj.states[traj.index_at(t1)], eigsys);
  const auto p2 = eigen_overlaps(traj.states[traj.index_at(t2)], eigsys);
  std::vector<double> delta(p1.size());
  for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = p2[i] - p1[i];
  return delta;
}

GroupSeries group_probabilities(const Trajectory& traj, bool path_only, int core_spins) {
  const int n = traj.model.spin_count();
  if (core_spins < 1 || core_spins > n) throw ValidationError("core spin count must lie in [1, n]");
  const std::size_t dim = traj.model.dimension();
  const std::uint32_t outer_mask = ((1U << n) - 1U) & ~((1U << core_spins) - 1U);

  // -1 marks states excluded by the path restriction.
  std::vector<int> slot(dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    const auto label = group_label(BasisIndex(i), core_spins);
    const bool intermediate =
        label == GroupLabel::E1 || label == GroupLabel::E2 || label == GroupLabel::E3;
    slot[i] = (path_only && intermediate && (i & outer_mask) != 0) ? -1 : static_cast<int>(label);
  }

  GroupSeries series;
  series.times = traj.times;
  series.values.reserve(traj.size());
  for (const auto& state : traj.states) {
    std::array<double, kGroupCount> sums{};
    for (std::size_t i = 0; i < dim; ++i) {
      if (slot[i] >= 0) sums[static_cast<std::size_t>(slot[i])] += std::norm(state[i]);
    }
    series.values.push_back(sums);
  }
  return series;
}

std::vector<BridgeState> bridge_state_finder(const EigenSystem& eigsys,
                                             const GroundStatePartition& partition,
                                             double threshold, std::size_t max_states,
                                             int core_spins) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("threshold must lie in (0, 1)");
  const std::size_t dim = eigsys.size();
  std::vector<char> clustered_side(dim, 0);
  std::vector<char> isolated_side(dim, 0);
  for (auto b : partition.clustered) {
    if (b.value >= dim) throw ValidationError("partition does not match the eigensystem");
    clustered_side[b.value] = 1;
  }
  if (partition.isolated.value >= dim) throw ValidationError("partition does not match the eigensystem");
  isolated_side[partition.isolated.value] = 1;
  for (std::uint32_t i = 0; i < dim; ++i) {
    const auto label = group_label(BasisIndex(i), core_spins);
    if (label == GroupLabel::E1) clustered_side[i] = 1;
    if (label == GroupLabel::E3 || label == GroupLabel::ISO) isolated_side[i] = 1;
  }

  std::vector<BridgeState> found;
  const std::size_t limit = std::min(max_states, dim);
  for (std::size_t a = 0; a < limit; ++a) {
    BridgeState cand;
    cand.index = a;
    cand.profile.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double v = eigsys.eigenvectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
      cand.profile[i] = v * v;
      if (clustered_side[i]) cand.clustered_peak = std::max(cand.clustered_peak, cand.profile[i]);
      if (isolated_side[i]) cand.isolated_peak = std::max(cand.isolated_peak, cand.profile[i]);
    }
    if (cand.clustered_peak > threshold && cand.isolated_peak > threshold) {
      found.push_back(std::move(cand));
    }
  }
  return found;
}

std::vector<double> moving_average(const std::vector<double>& times,
                                   const std::vector<double>& values, double window) {
  if (times.empty() || values.empty()) throw ValidationError("moving average of an empty series");
  if (times.size() != values.size()) throw ValidationError("times and values differ in length");
  if (!(window > 0.0)) throw ValidationError("moving-average window must be positive");
  const double half = 0.5 * window;
  const double slack = 1e-9 * std::max(window, 1e-300);
  std::vector<double> out(values.size());
  std::size_t lo = 0;
  std::size_t hi = 0;  // one past the last sample inside the window
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    while (hi < values.size() && times[hi] < times[k] + half - slack) sum += values[hi++];
    while (lo < hi && times[lo] < times[k] - half - slack) sum -= values[lo++];
    out[k] = sum / static_cast<double>(hi - lo);
  }
  return out;
}

namespace {

double median_of(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

}  // namespace

OutlierFilterResult mad_outlier_filter(const std::vector<double>& values, double k) {
  if (!(k > 0.0)) throw ValidationError("outlier multiplier must be positive");
  OutlierFilterResult res;
  if (values.empty()) return res;
  res.median = median_of(values);
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = std::abs(values[i] - res.median);
  res.mad = median_of(dev);
  const double limit = k * res.mad;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (dev[i] > limit) {
      res.rejected.push_back(i);
    } else {
      res.kept.push_back(values[i]);
    }
  }
  if (res.mad == 0.0 && !res.rejected.empty()) {
    warn("mad_outlier_filter: MAD is zero; dropped " + std::to_string(res.rejected.size()) +
         " values differing from the median");
  }
  return res;
}

}  // namespace idqa
