#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "idqa/ising.hpp"
#include "idqa/schedule.hpp"

namespace idqa {

/// Unit-norm vector of z-basis amplitudes.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-9;

  /// Throws ValidationError unless the size is a power of two and
  /// |sum |c_i|^2 - 1| <= kNormTolerance.
  explicit StateVector(Amplitudes amplitudes);

  /// Rescales to unit norm; throws ValidationError for the zero vector.
  static StateVector normalized(Amplitudes amplitudes);

  /// c_i = 1 / sqrt(N).
  static StateVector uniform(std::size_t dimension);

  static StateVector basis(std::size_t dimension, BasisIndex index);

  std::span<const Complex> amplitudes() const { return amps_; }
  std::size_t dimension() const { return amps_.size(); }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  std::vector<double> probabilities() const;

 private:
  Amplitudes amps_;
};

double norm_squared(std::span<const Complex> c);

struct DynamicsParams {
  /// Interpolation strength between Schrodinger (0) and master-equation (1) flow.
  double alpha = 0.0045;
  double temperature = 0.3;
  /// Dimensionless time units per microsecond.
  double time_scale = 1000.0;
  /// Floor on |c_i|^2 in the dissipative denominator. Zero disables it.
  double reg_floor = 1e-24;
  double atol = 1.136871e-13;
  double rtol = 1.136871e-13;
  /// Renormalization period; every output step is also a potential snapshot.
  double output_step = 0.01;
  /// Record every k-th output step (the final state is always recorded).
  int snapshot_every = 1;
  /// Internal step budget per output step.
  std::int64_t max_steps = 200000;
  /// Use unscaled E_i in the transition rates instead of B(s) * E_i.
  bool bare_energies = false;
  /// Tolerated |norm^2 - 1| accumulated over one output step.
  double max_norm_drift = 1e-6;

  /// Throws ValidationError when a field is out of range.
  void validate() const;
};

/// Single-spin-flip transition-rate matrix
///   L_ij = [1 + exp((E~_i - E~_j) / T)]^-1   for i, j one flip apart,
///   L_ii = -sum_{k != i} L_ki,
/// with E~ = B * E (or E when bare energies are requested). Applied
/// matrix-free. Rates are cached per distinct energy difference and refreshed
/// when B changes.
class TransitionGenerator {
 public:
  TransitionGenerator(const IsingModel& model, double temperature, bool bare_energies = false);

  void set_field_scale(double B);

  /// out = L p.
  void apply(std::span<const double> p, std::span<double> out) const;

  /// L_{i xor 2^b, i}: rate out of state i by flipping spin b.
  double rate_out(std::size_t i, int b) const { return rates_[out_index_[i * n_ + b]]; }
  /// L_{i, i xor 2^b}: rate into state i from its neighbor across spin b.
  double rate_in(std::size_t i, int b) const { return rates_[in_index_[i * n_ + b]]; }

  int spin_count() const { return n_; }
  std::size_t dimension() const { return dim_; }

 private:
  int n_;
  std::size_t dim_;
  double temperature_;
  bool bare_;
  double scale_ = -1.0;
  std::vector<double> deltas_;
  std::vector<double> rates_;
  std::vector<std::uint32_t> in_index_;
  std::vector<std::uint32_t> out_index_;
};

/// (L p) for the instantaneous diagonal B * E. Warns when p is not a
/// probability vector; throws ValidationError for T <= 0 or size mismatch.
std::vector<double> transition_rate_apply(const IsingModel& model, double B, double temperature,
                                          std::span<const double> p, bool bare_energies = false);

/// Right-hand side of the interpolated dynamics:
///
///   dc_i/dt = -i (Hc)_i
///           + alpha / (2 max(|c_i|^2, eps)) * c_i * [ (L|c|^2)_i - 2 Im(conj(c_i) (Hc)_i) ]
///
/// The dissipative bracket is the gap between the master-equation flow and
/// the Schrodinger flow of |c_i|^2; the prefactor converts a probability
/// rate into an amplitude rate along c_i, so the phase of c_i follows the
/// Schrodinger part only. At alpha = 0 the expression is exactly -iHc.
class InterpolatedDynamics {
 public:
  InterpolatedDynamics(IsingModel model, DynamicsParams params);

  /// Throws SingularityError when the floor is zero and some c_i vanishes.
  void rhs(double A, double B, std::span<const Complex> c, std::span<Complex> dcdt);

  const IsingModel& model() const { return model_; }
  const DynamicsParams& params() const { return params_; }
  std::span<const double> energies() const { return energies_; }

 private:
  IsingModel model_;
  DynamicsParams params_;
  std::vector<double> energies_;
  TransitionGenerator generator_;
  std::vector<Complex> hc_;
  std::vector<double> prob_;
  std::vector<double> flow_;
};

Amplitudes id_rhs(const IsingModel& model, double A, double B, const DynamicsParams& params,
                  const StateVector& c);

struct DiscreteStepResult {
  StateVector state;
  int clamped = 0;       ///< entries with r_i < 0 set to zero
  int phase_kept = 0;    ///< entries whose Schrodinger amplitude vanished
};

/// One explicit step of the interpolation protocol: Euler-advance the
/// amplitudes and the probabilities separately, mix the probabilities with
/// weight alpha, reattach the advanced phases and renormalize.
DiscreteStepResult discrete_step_reference(const IsingModel& model, double A, double B,
                                           const DynamicsParams& params, const StateVector& c,
                                           double dt);

struct Trajectory {
  IsingModel model;
  ControlSchedule schedule;
  DynamicsParams params;
  std::vector<double> times;
  std::vector<Controls> controls;
  std::vector<StateVector> states;
  /// |c|^2 just before renormalization at each snapshot (1 at t = 0).
  std::vector<double> norms;
  /// Largest |norm^2 - 1| seen at any output step.
  double max_norm_drift = 0.0;
  std::int64_t rhs_evaluations = 0;

  std::size_t size() const { return times.size(); }
  /// Index of the snapshot nearest to t; throws ValidationError when t lies
  /// outside the recorded range.
  std::size_t index_at(double t) const;
};

/// Called with (t, controls, state) at each recorded snapshot.
using SnapshotObserver = std::function<void(double, const Controls&, const StateVector&)>;

/// Integrates the interpolated dynamics over the whole schedule with an
/// adaptive embedded Runge-Kutta 7(8) method, renormalizing at every output
/// step. Starts from the uniform superposition unless `initial` is given.
/// Throws NumericalError on step-limit exhaustion, step-size underflow, or
/// norm drift beyond params.max_norm_drift.
Trajectory integrate(const IsingModel& model, const ControlSchedule& schedule,
                     const DynamicsParams& params,
                     std::optional<StateVector> initial = std::nullopt,
                     const SnapshotObserver& observer = {});

Trajectory integrate(const IsingModel& model, const ScheduleCurves& curves, const AnnealPath& path,
                     const DynamicsParams& params);

}  // namespace idqa
