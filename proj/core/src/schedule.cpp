#include "idqa/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "idqa/errors.hpp"

namespace idqa {
namespace {

// Slack for evaluation points that overshoot an endpoint by rounding.
constexpr double kEdgeSlack = 1e-9;

template <typename Point, typename Key>
std::size_t segment_of(const std::vector<Point>& pts, double x, Key key) {
  auto it = std::upper_bound(pts.begin(), pts.end(), x,
                             [&](double v, const Point& p) { return v < key(p); });
  std::size_t hi = static_cast<std::size_t>(it - pts.begin());
  hi = std::clamp<std::size_t>(hi, 1, pts.size() - 1);
  return hi - 1;
}

}  // namespace

AnnealPath::AnnealPath(std::vector<Breakpoint> breakpoints) : points_(std::move(breakpoints)) {
  if (points_.size() < 2) throw ValidationError("anneal path needs at least two breakpoints");
  if (points_.front().t != 0.0 || points_.front().s != 0.0) {
    throw ValidationError("anneal path must start at (0, 0)");
  }
  if (points_.back().s != 1.0) throw ValidationError("anneal path must end at s = 1");
  for (std::size_t k = 1; k < points_.size(); ++k) {
    if (!(points_[k].t > points_[k - 1].t)) {
      throw ValidationError("anneal path times must be strictly increasing");
    }
    if (points_[k].s < points_[k - 1].s) {
      throw ValidationError("anneal path s values must be non-decreasing");
    }
    if (points_[k].s < 0.0 || points_[k].s > 1.0) {
      throw ValidationError("anneal path s values must lie in [0, 1]");
    }
  }
}

AnnealPath AnnealPath::linear(double tau) {
  if (!(tau > 0.0)) throw ValidationError("anneal time must be positive");
  return AnnealPath({{0.0, 0.0}, {tau, 1.0}});
}

AnnealPath make_pause_path(double tau_anneal, double tau_pause, double s_pause) {
  if (!(tau_anneal > 0.0)) throw ValidationError("tau_anneal must be positive");
  if (!(tau_pause >= 0.0)) throw ValidationError("tau_pause must be non-negative");
  if (!(s_pause > 0.0 && s_pause < 1.0)) {
    throw ValidationError("s_pause must lie in (0, 1), got " + std::to_string(s_pause));
  }
  if (tau_pause == 0.0) return AnnealPath::linear(tau_anneal);
  const double start = s_pause * tau_anneal;
  return AnnealPath({{0.0, 0.0},
                     {start, s_pause},
                     {start + tau_pause, s_pause},
                     {tau_anneal + tau_pause, 1.0}});
}

double eval_path(const AnnealPath& path, double t) {
  const double total = path.total_time();
  const double slack = kEdgeSlack * std::max(1.0, total);
  if (!(t >= -slack && t <= total + slack)) {
    throw ValidationError("time " + std::to_string(t) + " outside path range [0, " +
                          std::to_string(total) + "]");
  }
  t = std::clamp(t, 0.0, total);
  const auto& pts = path.breakpoints();
  const std::size_t k = segment_of(pts, t, [](const Breakpoint& p) { return p.t; });
  const auto& a = pts[k];
  const auto& b = pts[k + 1];
  const double w = (t - a.t) / (b.t - a.t);
  return std::clamp(a.s + w * (b.s - a.s), 0.0, 1.0);
}

ScheduleCurves::ScheduleCurves(std::vector<CurveSample> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw ValidationError("schedule curves need at least two samples");
  if (samples_.front().s != 0.0 || samples_.back().s != 1.0) {
    throw ValidationError("schedule curves must span s = 0 to s = 1");
  }
  if (samples_.front().B != 0.0) throw ValidationError("schedule curves require B(0) = 0");
  if (samples_.back().A != 0.0) throw ValidationError("schedule curves require A(1) = 0");
  for (std::size_t k = 1; k < samples_.size(); ++k) {
    const auto& p = samples_[k - 1];
    const auto& q = samples_[k];
    if (!(q.s > p.s)) throw ValidationError("schedule curve s values must be strictly increasing");
    if (q.A > p.A) throw ValidationError("schedule curve A must be non-increasing");
    if (q.B < p.B) throw ValidationError("schedule curve B must be non-decreasing");
  }
}

ScheduleCurves ScheduleCurves::linear() { return ScheduleCurves({{0.0, 1.0, 0.0}, {1.0, 0.0, 1.0}}); }

CurveValues eval_curves(const ScheduleCurves& curves, double s) {
  if (!(s >= -kEdgeSlack && s <= 1.0 + kEdgeSlack)) {
    throw ValidationError("schedule point s = " + std::to_string(s) + " outside [0, 1]");
  }
  s = std::clamp(s, 0.0, 1.0);
  const auto& pts = curves.samples();
  const std::size_t k = segment_of(pts, s, [](const CurveSample& p) { return p.s; });
  const auto& a = pts[k];
  const auto& b = pts[k + 1];
  const double w = (s - a.s) / (b.s - a.s);
  return {a.A + w * (b.A - a.A), a.B + w * (b.B - a.B)};
}

ControlSchedule::ControlSchedule(AnnealPath path, ScheduleCurves curves)
    : path_(std::move(path)), curves_(std::move(curves)) {
  total_time_ = path_->total_time();
}

ControlSchedule::ControlSchedule(Controls fixed, double duration)
    : fixed_(fixed), total_time_(duration) {
  if (!(duration > 0.0)) throw ValidationError("hold duration must be positive");
}

ControlSchedule ControlSchedule::hold(const ScheduleCurves& curves, double s, double duration) {
  const auto v = eval_curves(curves, s);
  return ControlSchedule(Controls{s, v.A, v.B}, duration);
}

ControlSchedule ControlSchedule::hold(Controls controls, double duration) {
  return ControlSchedule(controls, duration);
}

Controls ControlSchedule::at(double t) const {
  if (!path_) return fixed_;
  const double s = eval_path(*path_, t);
  const auto v = eval_curves(*curves_, s);
  return {s, v.A, v.B};
}

std::vector<double> ControlSchedule::kinks() const {
  std::vector<double> out;
  if (!path_) return out;
  const auto& pts = path_->breakpoints();
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) out.push_back(pts[k].t);
  // Curve breakpoints also produce kinks once composed with s(t).
  const auto& samples = curves_->samples();
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const double s = samples[k].s;
    for (std::size_t m = 1; m < pts.size(); ++m) {
      const auto& a = pts[m - 1];
      const auto& b = pts[m];
      if (b.s > a.s && s > a.s && s < b.s) out.push_back(a.t + (s - a.s) / (b.s - a.s) * (b.t - a.t));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace idqa
