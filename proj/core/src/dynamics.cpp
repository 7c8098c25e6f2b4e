#include "idqa/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include <boost/numeric/odeint.hpp>

#include "idqa/errors.hpp"

namespace idqa {

double norm_squared(std::span<const Complex> c) {
  double sum = 0.0;
  for (const auto& z : c) sum += std::norm(z);
  return sum;
}

namespace {

void check_dimension(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw ValidationError("state dimension " + std::to_string(dim) + " is not a power of two");
  }
}

}  // namespace

StateVector::StateVector(Amplitudes amplitudes) : amps_(std::move(amplitudes)) {
  check_dimension(amps_.size());
  const double norm = norm_squared(amps_);
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw ValidationError("state vector norm^2 = " + std::to_string(norm) + " is not 1");
  }
}

StateVector StateVector::normalized(Amplitudes amplitudes) {
  check_dimension(amplitudes.size());
  const double norm = std::sqrt(norm_squared(amplitudes));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("cannot normalize a zero or non-finite state vector");
  }
  for (auto& z : amplitudes) z /= norm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::uniform(std::size_t dimension) {
  check_dimension(dimension);
  return StateVector(Amplitudes(dimension, Complex(1.0 / std::sqrt(double(dimension)), 0.0)));
}

StateVector StateVector::basis(std::size_t dimension, BasisIndex index) {
  check_dimension(dimension);
  if (index.value >= dimension) throw ValidationError("basis index out of range");
  Amplitudes a(dimension);
  a[index.value] = 1.0;
  return StateVector(std::move(a));
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  std::transform(amps_.begin(), amps_.end(), p.begin(), [](const Complex& z) { return std::norm(z); });
  return p;
}

void DynamicsParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  if (!(time_scale > 0.0)) throw ValidationError("time scale must be positive");
  if (!(reg_floor >= 0.0)) throw ValidationError("regularization floor must be non-negative");
  if (!(atol > 0.0) || !(rtol > 0.0)) throw ValidationError("tolerances must be positive");
  if (!(output_step > 0.0)) throw ValidationError("output step must be positive");
  if (snapshot_every < 1) throw ValidationError("snapshot stride must be at least 1");
  if (max_steps < 1) throw ValidationError("step budget must be at least 1");
  if (!(max_norm_drift > 0.0)) throw ValidationError("norm drift bound must be positive");
}

// ---------------------------------------------------------------------------
// Transition rates

TransitionGenerator::TransitionGenerator(const IsingModel& model, double temperature,
                                         bool bare_energies)
    : n_(model.spin_count()),
      dim_(model.dimension()),
      temperature_(temperature),
      bare_(bare_energies),
      in_index_(dim_ * static_cast<std::size_t>(n_)),
      out_index_(dim_ * static_cast<std::size_t>(n_)) {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  const auto energies = diagonal_energies(model);
  std::map<double, std::uint32_t> slot;
  auto index_of = [&](double delta) {
    auto [it, inserted] = slot.try_emplace(delta, static_cast<std::uint32_t>(deltas_.size()));
    if (inserted) deltas_.push_back(delta);
    return it->second;
  };
  for (std::size_t i = 0; i < dim_; ++i) {
    for (int b = 0; b < n_; ++b) {
      const std::size_t j = i ^ (std::size_t{1} << b);
      in_index_[i * n_ + b] = index_of(energies[i] - energies[j]);
      out_index_[i * n_ + b] = index_of(energies[j] - energies[i]);
    }
  }
  rates_.resize(deltas_.size());
  set_field_scale(1.0);
}

void TransitionGenerator::set_field_scale(double B) {
  const double scale = bare_ ? 1.0 : B;
  if (scale == scale_) return;
  scale_ = scale;
  for (std::size_t k = 0; k < deltas_.size(); ++k) {
    rates_[k] = 1.0 / (1.0 + std::exp(scale * deltas_[k] / temperature_));
  }
}

void TransitionGenerator::apply(std::span<const double> p, std::span<double> out) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (int b = 0; b < n_; ++b) {
      const std::size_t j = i ^ (std::size_t{1} << b);
      acc += rates_[in_index_[i * n_ + b]] * p[j] - rates_[out_index_[i * n_ + b]] * p[i];
    }
    out[i] = acc;
  }
}

std::vector<double> transition_rate_apply(const IsingModel& model, double B, double temperature,
                                          std::span<const double> p, bool bare_energies) {
  if (p.size() != model.dimension()) {
    throw ValidationError("probability vector size does not match 2^n");
  }
  double total = 0.0;
  bool negative = false;
  for (double v : p) {
    total += v;
    negative = negative || v < 0.0;
  }
  if (negative || std::abs(total - 1.0) > 1e-9) {
    warn("transition_rate_apply: input is not a normalized probability vector (sum = " +
         std::to_string(total) + ")");
  }
  TransitionGenerator gen(model, temperature, bare_energies);
  gen.set_field_scale(B);
  std::vector<double> out(p.size());
  gen.apply(p, out);
  return out;
}

// ---------------------------------------------------------------------------
// Right-hand side

InterpolatedDynamics::InterpolatedDynamics(IsingModel model, DynamicsParams params)
    : model_(std::move(model)),
      params_(params),
      energies_(diagonal_energies(model_)),
      generator_(model_, params.temperature, params.bare_energies),
      hc_(model_.dimension()),
      prob_(model_.dimension()),
      flow_(model_.dimension()) {
  params_.validate();
}

void InterpolatedDynamics::rhs(double A, double B, std::span<const Complex> c,
                               std::span<Complex> dcdt) {
  const std::size_t dim = model_.dimension();
  if (c.size() != dim || dcdt.size() != dim) {
    throw ValidationError("state dimension does not match 2^n");
  }
  apply_hamiltonian(model_, energies_, A, B, c, hc_);
  const double alpha = params_.alpha;
  if (alpha == 0.0) {
    for (std::size_t i = 0; i < dim; ++i) dcdt[i] = Complex(hc_[i].imag(), -hc_[i].real());
    return;
  }
  for (std::size_t i = 0; i < dim; ++i) prob_[i] = std::norm(c[i]);
  generator_.set_field_scale(B);
  generator_.apply(prob_, flow_);
  const double eps = params_.reg_floor;
  for (std::size_t i = 0; i < dim; ++i) {
    const double denom = std::max(prob_[i], eps);
    if (denom == 0.0) {
      throw SingularityError("amplitude " + std::to_string(i) +
                             " vanished with no regularization floor");
    }
    const double schrodinger_flow = 2.0 * (std::conj(c[i]) * hc_[i]).imag();
    const double gain = alpha * (flow_[i] - schrodinger_flow) / (2.0 * denom);
    dcdt[i] = Complex(hc_[i].imag(), -hc_[i].real()) + gain * c[i];
  }
}

Amplitudes id_rhs(const IsingModel& model, double A, double B, const DynamicsParams& params,
                  const StateVector& c) {
  InterpolatedDynamics dyn(model, params);
  Amplitudes out(c.dimension());
  dyn.rhs(A, B, c.amplitudes(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Discrete reference protocol

DiscreteStepResult discrete_step_reference(const IsingModel& model, double A, double B,
                                           const DynamicsParams& params, const StateVector& c,
                                           double dt) {
  params.validate();
  if (!(dt > 0.0)) throw ValidationError("discrete step requires dt > 0");
  const std::size_t dim = model.dimension();
  if (c.dimension() != dim) throw ValidationError("state dimension does not match 2^n");

  const auto amps = c.amplitudes();
  const auto hc = apply_hamiltonian(model, A, B, amps);
  const auto prob = c.probabilities();
  TransitionGenerator gen(model, params.temperature, params.bare_energies);
  gen.set_field_scale(B);
  std::vector<double> flow(dim);
  gen.apply(prob, flow);

  const double alpha = params.alpha;
  int clamped = 0;
  int phase_kept = 0;
  Amplitudes next(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const Complex advanced = amps[i] - Complex(0.0, 1.0) * hc[i] * dt;
    const double q = prob[i] + flow[i] * dt;
    double r = (1.0 - alpha) * std::norm(advanced) + alpha * q;
    if (r < 0.0) {
      r = 0.0;
      ++clamped;
    }
    const double magnitude = std::abs(advanced);
    Complex phase;
    if (magnitude > 0.0) {
      phase = advanced / magnitude;
    } else {
      ++phase_kept;
      const double m0 = std::abs(amps[i]);
      phase = m0 > 0.0 ? amps[i] / m0 : Complex(1.0, 0.0);
    }
    next[i] = std::sqrt(r) * phase;
  }
  if (clamped > 0) {
    warn("discrete_step_reference: clamped " + std::to_string(clamped) +
         " negative interpolated probabilities; dt is too large");
  }
  return {StateVector::normalized(std::move(next)), clamped, phase_kept};
}

// ---------------------------------------------------------------------------
// Integration

std::size_t Trajectory::index_at(double t) const {
  if (times.empty()) throw ValidationError("empty trajectory");
  const double slack = 1e-9 * std::max(1.0, times.back());
  if (t < times.front() - slack || t > times.back() + slack) {
    throw ValidationError("time " + std::to_string(t) + " outside trajectory range");
  }
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  const auto k = static_cast<std::size_t>(it - times.begin());
  if (k > 0 && (t - times[k - 1]) <= (times[k] - t)) return k - 1;
  return k;
}

namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::vector<Complex>;
using ErrorStepper = odeint::runge_kutta_fehlberg78<OdeState, double, OdeState, double>;

struct OdeSystem {
  InterpolatedDynamics* dynamics;
  const ControlSchedule* schedule;
  std::int64_t* evaluations;

  void operator()(const OdeState& x, OdeState& dxdt, double t) const {
    const auto ctl = schedule->at(t);
    dynamics->rhs(ctl.A, ctl.B, x, dxdt);
    ++*evaluations;
  }
};

}  // namespace

Trajectory integrate(const IsingModel& model, const ControlSchedule& schedule,
                     const DynamicsParams& params, std::optional<StateVector> initial,
                     const SnapshotObserver& observer) {
  params.validate();
  InterpolatedDynamics dynamics(model, params);
  StateVector start = initial ? std::move(*initial) : StateVector::uniform(model.dimension());
  if (start.dimension() != model.dimension()) {
    throw ValidationError("initial state dimension does not match 2^n");
  }

  Trajectory traj{model, schedule, params, {}, {}, {}, {}, 0.0, 0};
  auto record = [&](double t, const StateVector& s, double norm) {
    const auto ctl = schedule.at(t);
    traj.times.push_back(t);
    traj.controls.push_back(ctl);
    traj.states.push_back(s);
    traj.norms.push_back(norm);
    if (observer) observer(t, ctl, s);
  };
  record(0.0, start, 1.0);

  const double total = schedule.total_time();
  const double h = params.output_step;
  const auto intervals = static_cast<std::int64_t>(std::ceil(total / h - 1e-9));
  const auto kinks = schedule.kinks();

  OdeState x(start.amplitudes().begin(), start.amplitudes().end());
  OdeSystem system{&dynamics, &schedule, &traj.rhs_evaluations};
  auto stepper = odeint::make_controlled<ErrorStepper>(params.atol, params.rtol);
  double dt = std::min(h, 1e-3);
  auto kink = kinks.begin();

  for (std::int64_t k = 1; k <= intervals; ++k) {
    const double t0 = static_cast<double>(k - 1) * h;
    const double t1 = (k == intervals) ? total : std::min(static_cast<double>(k) * h, total);
    double t = t0;
    std::int64_t steps = 0;
    while (t < t1) {
      while (kink != kinks.end() && *kink <= t) ++kink;
      const double target = (kink != kinks.end() && *kink < t1) ? *kink : t1;
      const double remaining = target - t;
      const bool clipped = dt >= remaining;
      double trial = clipped ? remaining : dt;
      const double before = t;
      if (stepper.try_step(system, x, t, trial) == odeint::success) {
        if (clipped) t = target;  // land exactly on the grid
        if (!clipped) dt = trial;
      } else {
        dt = trial;
      }
      if (++steps > params.max_steps) {
        throw NumericalError("step budget of " + std::to_string(params.max_steps) +
                             " exhausted near t = " + std::to_string(before));
      }
      if (!(dt > 1e-14 * std::max(1.0, std::abs(t)))) {
        throw NumericalError("step size underflow near t = " + std::to_string(t));
      }
    }
    const double norm = norm_squared(x);
    const double drift = std::abs(norm - 1.0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (!(drift <= params.max_norm_drift)) {
      throw NumericalError("norm drift " + std::to_string(drift) + " at t = " + std::to_string(t1) +
                           " exceeds " + std::to_string(params.max_norm_drift));
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& z : x) z *= scale;
    if (k % params.snapshot_every == 0 || k == intervals) {
      record(t1, StateVector(OdeState(x)), norm);
    }
  }
  return traj;
}

Trajectory integrate(const IsingModel& model, const ScheduleCurves& curves, const AnnealPath& path,
                     const DynamicsParams& params) {
  return integrate(model, ControlSchedule(path, curves), params);
}

}  // namespace idqa
