#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "idqa/analysis.hpp"
#include "idqa/spectral.hpp"

using namespace idqa;

namespace {

DynamicsParams sparse_snapshots(double alpha, int every) {
  DynamicsParams p;
  p.alpha = alpha;
  p.snapshot_every = every;
  return p;
}

}  // namespace

TEST_CASE("signature partition") {
  const auto part = signature_partition(build_quantum_signature());
  CHECK(part.clustered.size() == 16);
  CHECK(part.isolated.value == 0);
  for (auto b : part.clustered) CHECK((b.value & 0xFU) == 0xFU);
  CHECK_THROWS_AS(signature_partition(IsingModel(8, {}, std::vector<double>(8, 1.0))), ValidationError);
}

TEST_CASE("group labels") {
  CHECK(group_label(BasisIndex(0xFF)) == GroupLabel::CL);
  CHECK(group_label(BasisIndex(0x07)) == GroupLabel::E1);
  CHECK(group_label(BasisIndex(0x03)) == GroupLabel::E2);
  CHECK(group_label(BasisIndex(0x01)) == GroupLabel::E3);
  CHECK(group_label(BasisIndex(0x00)) == GroupLabel::ISO);
  CHECK(group_label(BasisIndex(0xF0)) == GroupLabel::ISO);
  CHECK(to_string(GroupLabel::E2) == "E2");
}

TEST_CASE("ps_pc examples") {
  const auto part = signature_partition(build_quantum_signature());
  const auto u = ps_pc(StateVector::uniform(256), part);
  CHECK(u.ps == doctest::Approx(1.0 / 256));
  CHECK(u.pc == doctest::Approx(1.0 / 256));
  CHECK(u.ratio == doctest::Approx(1.0));

  Amplitudes g(256);
  g[0] = 1.0 / std::sqrt(17.0);
  for (auto b : part.clustered) g[b.value] = 1.0 / std::sqrt(17.0);
  const auto eq = ps_pc(StateVector(g), part);
  CHECK(eq.ps == doctest::Approx(1.0 / 17));
  CHECK(eq.ratio == doctest::Approx(1.0));

  const auto iso = ps_pc(StateVector::basis(256, BasisIndex(0)), part);
  CHECK(iso.ps == 1.0);
  CHECK(iso.pc == 0.0);
  CHECK(iso.ratio == kInfiniteRatio);
}

TEST_CASE("pause grid") {
  const auto g = default_pause_grid();
  REQUIRE(g.size() == 49);
  CHECK(g.front() == doctest::Approx(0.02));
  CHECK(g.back() == doctest::Approx(0.98));
}

TEST_CASE("ratio sweep table shape") {
  const auto m = build_quantum_signature();
  const auto part = signature_partition(m);
  const auto p = sparse_snapshots(0.0045, 1000000);
  CHECK(ratio_sweep(m, ScheduleCurves::linear(), p, 5.0, 5.0, {}, part).empty());

  const auto base = ratio_sweep(m, ScheduleCurves::linear(), p, 5.0, 5.0, {0.0}, part);
  REQUIRE(base.size() == 1);
  CHECK(base[0].s_pause == 0.0);
  CHECK(base[0].tau_anneal == 5.0);

  const auto rows = ratio_sweep(m, ScheduleCurves::linear(), p, 5.0, 5.0, {0.3, 0.6}, part, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].s_pause == 0.0);
  CHECK(rows[1].s_pause == 0.3);
  CHECK(rows[2].s_pause == 0.6);
  for (const auto& r : rows) {
    CHECK(r.status == "ok");
    CHECK(std::abs(r.final_norm - 1.0) < 1e-6);
  }
}

TEST_CASE("ratio sweep records failed rows and continues") {
  const auto m = build_quantum_signature();
  auto p = sparse_snapshots(0.0045, 1000000);
  p.max_steps = 1;
  p.atol = p.rtol = 1e-15;
  const auto rows = ratio_sweep(m, ScheduleCurves::linear(), p, 5.0, 5.0, {0.5}, signature_partition(m));
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) CHECK(r.status.rfind("failed", 0) == 0);
}

TEST_CASE("probability_change") {
  const auto m = build_quantum_signature();
  const ControlSchedule sched(make_pause_path(4.0, 4.0, 0.5), ScheduleCurves::linear());
  const auto open = integrate(m, sched, sparse_snapshots(0.0045, 10));
  const auto zero = probability_change(open, 2.0, 2.0);
  CHECK(std::all_of(zero.begin(), zero.end(), [](double v) { return v == 0.0; }));
  const auto dz = probability_change(open, 2.0, 6.0);
  CHECK(std::abs(std::accumulate(dz.begin(), dz.end(), 0.0)) < 1e-9);

  const auto eig = eigensystem(m, ScheduleCurves::linear(), 0.5);
  const auto de = probability_change(open, eig, 2.0, 6.0);
  CHECK(std::abs(std::accumulate(de.begin(), de.end(), 0.0)) < 1e-9);

  const auto closed = integrate(m, sched, sparse_snapshots(0.0, 10));
  for (double v : probability_change(closed, eig, 2.0, 6.0)) CHECK(std::abs(v) <= 1e-6);

  CHECK_THROWS_AS(probability_change(open, 6.0, 2.0), ValidationError);
  CHECK_THROWS_AS(probability_change(open, 2.0, 60.0), ValidationError);
}

TEST_CASE("group probabilities") {
  const auto m = build_quantum_signature();
  const auto traj = integrate(m, ControlSchedule(AnnealPath::linear(2.0), ScheduleCurves::linear()),
                              sparse_snapshots(0.0045, 20));
  const auto series = group_probabilities(traj);
  REQUIRE(series.times.size() == traj.size());
  // Starts uniform: 16 states with the core all up.
  CHECK(series.values[0][static_cast<std::size_t>(GroupLabel::CL)] == doctest::Approx(16.0 / 256));
  for (const auto& row : series.values) {
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  }
  const auto path = group_probabilities(traj, true);
  CHECK(path.values[0][static_cast<std::size_t>(GroupLabel::E1)] == doctest::Approx(4.0 / 256));
}

TEST_CASE("slow: closed-system group series stay flat during the pause") {
  const auto m = build_quantum_signature();
  const double tau = 1000.0;
  const ControlSchedule sched(make_pause_path(tau, tau, 0.5), ScheduleCurves::linear());
  const auto traj = integrate(m, sched, sparse_snapshots(0.0, 10));
  const auto series = group_probabilities(traj);
  for (std::size_t g = 0; g < kGroupCount; ++g) {
    std::vector<double> v;
    for (const auto& row : series.values) v.push_back(row[g]);
    const auto smooth = moving_average(series.times, v, 20.0);  // 20 ns
    double lo = 1.0;
    double hi = 0.0;
    for (std::size_t k = 0; k < smooth.size(); ++k) {
      if (series.times[k] >= 0.5 * tau + 10.0 && series.times[k] <= 1.5 * tau - 10.0) {
        lo = std::min(lo, smooth[k]);
        hi = std::max(hi, smooth[k]);
      }
    }
    CHECK(hi - lo <= 2e-3);
  }
}

TEST_CASE("bridge state finder") {
  const auto m = build_quantum_signature();
  const auto part = signature_partition(m);
  CHECK(bridge_state_finder(eigensystem(m, ScheduleCurves::linear(), 1.0), part, 1e-3).empty());
  const auto at0 = eigensystem(m, ScheduleCurves::linear(), 0.0);
  CHECK(bridge_state_finder(at0, part, 0.5 / 256, 1).size() == 1);
  CHECK(bridge_state_finder(at0, part, 2.0 / 256, 1).empty());
  const auto mid = bridge_state_finder(eigensystem(m, ScheduleCurves::linear(), 0.8), part, 1e-3);
  CHECK_FALSE(mid.empty());
  for (const auto& b : mid) {
    CHECK(b.index < 20);
    CHECK(b.clustered_peak >= 1e-3);
    CHECK(b.isolated_peak >= 1e-3);
  }
}

TEST_CASE("moving average") {
  const std::vector<double> t{0, 1, 2, 3, 4, 5};
  const std::vector<double> c(6, 2.5);
  CHECK(moving_average(t, c, 3.0) == c);
  const std::vector<double> x{1, 4, 2, 8, 5, 7};
  CHECK(moving_average(t, x, 0.5) == x);
  const std::vector<double> alt{1, -1, 1, -1, 1, -1};
  const auto s = moving_average(t, alt, 2.0);
  for (std::size_t i = 1; i + 1 < s.size(); ++i) CHECK(s[i] == 0.0);
  CHECK_THROWS_AS(moving_average({}, {}, 1.0), ValidationError);
  CHECK_THROWS_AS(moving_average(t, std::vector<double>{1.0}, 1.0), ValidationError);
}

TEST_CASE("MAD outlier filter") {
  const auto constant = mad_outlier_filter(std::vector<double>(10, 0.3));
  CHECK(constant.rejected.empty());
  CHECK(constant.kept.size() == 10);

  testing::WarningCapture warnings;
  const auto spike = mad_outlier_filter({0, 0, 0, 0, 100}, 6.0);
  REQUIRE(spike.rejected.size() == 1);
  CHECK(spike.rejected[0] == 4);
  CHECK_FALSE(warnings.messages.empty());

  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.02, 0.003);
  std::vector<double> data(5000);
  for (auto& v : data) v = g(rng);
  data[17] = 0.5;
  const auto res = mad_outlier_filter(data);
  CHECK(std::find(res.rejected.begin(), res.rejected.end(), 17) != res.rejected.end());
  CHECK(res.rejected.size() <= 25);
  CHECK(res.kept.size() + res.rejected.size() == data.size());
  CHECK(mad_outlier_filter({}).kept.empty());
}
