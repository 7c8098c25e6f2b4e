#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "idqa/dynamics.hpp"
#include "idqa/errors.hpp"

namespace testing {

inline idqa::Amplitudes random_amplitudes(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  idqa::Amplitudes a(dim);
  for (auto& z : a) z = {g(rng), g(rng)};
  const double n = std::sqrt(idqa::norm_squared(a));
  for (auto& z : a) z /= n;
  return a;
}

inline idqa::StateVector random_state(std::size_t dim, std::mt19937_64& rng) {
  return idqa::StateVector(random_amplitudes(dim, rng));
}

inline double max_abs_diff(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Captures library warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture()
      : previous_(idqa::set_warning_handler([this](std::string_view msg) { messages.emplace_back(msg); })) {}
  ~WarningCapture() { idqa::set_warning_handler(std::move(previous_)); }
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  std::vector<std::string> messages;

 private:
  idqa::WarningHandler previous_;
};

}  // namespace testing
