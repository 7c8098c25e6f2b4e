#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace idqa {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

/// Label of a z-basis state. Bit b set means spin b is up (sigma^z = +1).
struct BasisIndex {
  std::uint32_t value = 0;

  constexpr BasisIndex() = default;
  constexpr explicit BasisIndex(std::uint32_t v) : value(v) {}

  constexpr int spin(int b) const { return ((value >> b) & 1U) ? +1 : -1; }
  constexpr BasisIndex flipped(int b) const { return BasisIndex(value ^ (1U << b)); }

  friend constexpr auto operator<=>(BasisIndex, BasisIndex) = default;
};

struct Coupling {
  int i = 0;
  int j = 0;
  double strength = 0.0;
};

/// Transverse-field Ising model
///   H(A, B) = B * H_c + A * H_q,
///   H_c = -sum J_ij s_i s_j - sum h_i s_i,   H_q = -sum Gamma_i sigma^x_i.
class IsingModel {
 public:
  static constexpr int kMaxSpins = 30;

  /// Throws ValidationError on out-of-range or duplicate couplings, size
  /// mismatches, or non-positive transverse coefficients. An empty
  /// `transverse` means Gamma_i = 1 for every spin.
  IsingModel(int n, std::vector<Coupling> couplings, std::vector<double> fields,
             std::vector<double> transverse = {});

  int spin_count() const { return n_; }
  std::size_t dimension() const { return std::size_t{1} << n_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }
  const std::vector<double>& fields() const { return fields_; }
  const std::vector<double>& transverse() const { return transverse_; }

 private:
  int n_;
  std::vector<Coupling> couplings_;
  std::vector<double> fields_;
  std::vector<double> transverse_;
};

struct ClassicalSpectrum {
  std::vector<double> energies;
  double ground_energy = 0.0;
  std::vector<BasisIndex> ground_states;
};

inline constexpr int kSignatureSpins = 8;
inline constexpr int kSignatureCoreSpins = 4;
inline constexpr double kGroundEnergyTolerance = 1e-12;

/// Eight-spin model with 16 clustered ground states (core spins 0-3 up, any
/// outer configuration) and one isolated ground state (all spins down).
/// Core spins form a ferromagnetic ring with h = +1; each carries one outer
/// pendant spin with h = -1.
IsingModel build_quantum_signature();

/// Throws ValidationError if the index is outside [0, 2^n).
double classical_energy(const IsingModel& model, BasisIndex state);

/// Diagonal of H_c for every basis state, no size cap beyond kMaxSpins.
std::vector<double> diagonal_energies(const IsingModel& model);

ClassicalSpectrum classical_spectrum(const IsingModel& model, int max_spins = 20);

/// out = (B * H_c + A * H_q) c. Sizes must equal 2^n.
void apply_hamiltonian(const IsingModel& model, std::span<const double> energies,
                       double A, double B, std::span<const Complex> c,
                       std::span<Complex> out);

Amplitudes apply_hamiltonian(const IsingModel& model, double A, double B,
                             std::span<const Complex> c);

}  // namespace idqa
