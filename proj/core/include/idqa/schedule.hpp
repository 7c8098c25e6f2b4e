#pragma once

#include <optional>
#include <vector>

namespace idqa {

struct Breakpoint {
  double t = 0.0;
  double s = 0.0;
};

/// Piecewise-linear annealing path s(t) from (0, 0) to (total_time, 1).
class AnnealPath {
 public:
  /// Requires t strictly increasing, s non-decreasing, first point (0, 0)
  /// and last point (T, 1). Throws ValidationError otherwise.
  explicit AnnealPath(std::vector<Breakpoint> breakpoints);

  /// s(t) = t / tau.
  static AnnealPath linear(double tau);

  const std::vector<Breakpoint>& breakpoints() const { return points_; }
  double total_time() const { return points_.back().t; }

 private:
  std::vector<Breakpoint> points_;
};

/// Ramp to s_pause, hold for tau_pause, ramp to 1. The ramps together take
/// tau_anneal, so the hold spans [s_pause * tau_anneal, s_pause * tau_anneal + tau_pause].
AnnealPath make_pause_path(double tau_anneal, double tau_pause, double s_pause);

/// Throws ValidationError for t outside [0, total_time].
double eval_path(const AnnealPath& path, double t);

struct CurveSample {
  double s = 0.0;
  double A = 0.0;
  double B = 0.0;
};

struct CurveValues {
  double A = 0.0;
  double B = 0.0;
};

/// Tabulated A(s), B(s), linearly interpolated.
class ScheduleCurves {
 public:
  /// Requires s strictly increasing from 0 to 1, A non-increasing with
  /// A(1) = 0, B non-decreasing with B(0) = 0.
  explicit ScheduleCurves(std::vector<CurveSample> samples);

  /// A(s) = 1 - s, B(s) = s.
  static ScheduleCurves linear();

  const std::vector<CurveSample>& samples() const { return samples_; }

 private:
  std::vector<CurveSample> samples_;
};

CurveValues eval_curves(const ScheduleCurves& curves, double s);

struct Controls {
  double s = 0.0;
  double A = 0.0;
  double B = 0.0;
};

/// Everything the integrator needs to know about H(t): the annealing path
/// composed with the curves, or a fixed point held for a given duration.
class ControlSchedule {
 public:
  ControlSchedule(AnnealPath path, ScheduleCurves curves);

  /// Time-independent controls (A(s), B(s)) at a fixed s.
  static ControlSchedule hold(const ScheduleCurves& curves, double s, double duration);
  static ControlSchedule hold(Controls controls, double duration);

  Controls at(double t) const;
  double total_time() const { return total_time_; }

  /// Interior times where dH/dt may jump (path breakpoints).
  std::vector<double> kinks() const;

  const std::optional<AnnealPath>& path() const { return path_; }

 private:
  ControlSchedule(Controls fixed, double duration);

  std::optional<AnnealPath> path_;
  std::optional<ScheduleCurves> curves_;
  Controls fixed_{};
  double total_time_ = 0.0;
};

}  // namespace idqa
