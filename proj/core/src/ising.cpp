#include "idqa/ising.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "idqa/errors.hpp"

namespace idqa {

IsingModel::IsingModel(int n, std::vector<Coupling> couplings, std::vector<double> fields,
                       std::vector<double> transverse)
    : n_(n),
      couplings_(std::move(couplings)),
      fields_(std::move(fields)),
      transverse_(std::move(transverse)) {
  if (n_ < 1 || n_ > kMaxSpins) {
    throw ValidationError("spin count must be in [1, " + std::to_string(kMaxSpins) + "], got " +
                          std::to_string(n_));
  }
  if (fields_.empty()) fields_.assign(static_cast<std::size_t>(n_), 0.0);
  if (transverse_.empty()) transverse_.assign(static_cast<std::size_t>(n_), 1.0);
  if (fields_.size() != static_cast<std::size_t>(n_)) {
    throw ValidationError("field list has " + std::to_string(fields_.size()) +
                          " entries for " + std::to_string(n_) + " spins");
  }
  if (transverse_.size() != static_cast<std::size_t>(n_)) {
    throw ValidationError("transverse list has " + std::to_string(transverse_.size()) +
                          " entries for " + std::to_string(n_) + " spins");
  }
  for (double g : transverse_) {
    if (!(g > 0.0)) throw ValidationError("transverse coefficients must be positive");
  }
  std::set<std::pair<int, int>> seen;
  for (auto& c : couplings_) {
    if (c.i > c.j) std::swap(c.i, c.j);
    if (c.i < 0 || c.j >= n_ || c.i == c.j) {
      throw ValidationError("invalid coupling (" + std::to_string(c.i) + ", " +
                            std::to_string(c.j) + ")");
    }
    if (!seen.emplace(c.i, c.j).second) {
      throw ValidationError("duplicate coupling (" + std::to_string(c.i) + ", " +
                            std::to_string(c.j) + ")");
    }
  }
}

IsingModel build_quantum_signature() {
  std::vector<Coupling> couplings = {
      {0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0},  // core ring
      {0, 4, 1.0}, {1, 5, 1.0}, {2, 6, 1.0}, {3, 7, 1.0},  // pendants
  };
  std::vector<double> fields = {1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0};
  return IsingModel(kSignatureSpins, std::move(couplings), std::move(fields));
}

namespace {

double energy_unchecked(const IsingModel& model, BasisIndex state) {
  double e = 0.0;
  for (const auto& c : model.couplings()) e -= c.strength * state.spin(c.i) * state.spin(c.j);
  const auto& h = model.fields();
  for (int b = 0; b < model.spin_count(); ++b) e -= h[static_cast<std::size_t>(b)] * state.spin(b);
  return e;
}

}  // namespace

double classical_energy(const IsingModel& model, BasisIndex state) {
  if (state.value >= model.dimension()) {
    throw ValidationError("basis index " + std::to_string(state.value) + " out of range for " +
                          std::to_string(model.spin_count()) + " spins");
  }
  return energy_unchecked(model, state);
}

std::vector<double> diagonal_energies(const IsingModel& model) {
  std::vector<double> e(model.dimension());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = energy_unchecked(model, BasisIndex(static_cast<std::uint32_t>(i)));
  }
  return e;
}

ClassicalSpectrum classical_spectrum(const IsingModel& model, int max_spins) {
  if (model.spin_count() > max_spins) {
    throw ValidationError("classical spectrum limited to " + std::to_string(max_spins) +
                          " spins, model has " + std::to_string(model.spin_count()));
  }
  ClassicalSpectrum spec;
  spec.energies = diagonal_energies(model);
  spec.ground_energy = *std::min_element(spec.energies.begin(), spec.energies.end());
  for (std::size_t i = 0; i < spec.energies.size(); ++i) {
    if (std::abs(spec.energies[i] - spec.ground_energy) <= kGroundEnergyTolerance) {
      spec.ground_states.emplace_back(static_cast<std::uint32_t>(i));
    }
  }
  return spec;
}

void apply_hamiltonian(const IsingModel& model, std::span<const double> energies, double A,
                       double B, std::span<const Complex> c, std::span<Complex> out) {
  const std::size_t dim = model.dimension();
  if (c.size() != dim || out.size() != dim || energies.size() != dim) {
    throw ValidationError("state dimension " + std::to_string(c.size()) + " does not match 2^" +
                          std::to_string(model.spin_count()));
  }
  const int n = model.spin_count();
  const auto& gamma = model.transverse();
  for (std::size_t i = 0; i < dim; ++i) {
    Complex off{0.0, 0.0};
    for (int b = 0; b < n; ++b) off += gamma[static_cast<std::size_t>(b)] * c[i ^ (std::size_t{1} << b)];
    out[i] = B * energies[i] * c[i] - A * off;
  }
}

Amplitudes apply_hamiltonian(const IsingModel& model, double A, double B,
                             std::span<const Complex> c) {
  if (c.size() != model.dimension()) {
    throw ValidationError("state dimension " + std::to_string(c.size()) + " does not match 2^" +
                          std::to_string(model.spin_count()));
  }
  const auto energies = diagonal_energies(model);
  Amplitudes out(c.size());
  apply_hamiltonian(model, energies, A, B, c, out);
  return out;
}

}  // namespace idqa
