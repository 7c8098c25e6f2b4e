#pragma once

// Reference implementations used to cross-check the simulator. None of these
// share code paths with idqa::core beyond the IsingModel value type.

#include <complex>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "idqa/ising.hpp"
#include "idqa/schedule.hpp"

namespace idqa::verify {

/// Kronecker-product construction of H_c (diagonal) and H_q as dense
/// matrices. Spin b is the (n-1-b)-th tensor factor from the left so that
/// bit b of the row index is spin b; bit value 1 means sigma^z = +1.
struct PauliHamiltonian {
  Eigen::MatrixXd classical;
  Eigen::MatrixXd transverse;

  Eigen::MatrixXd at(double A, double B) const { return B * classical + A * transverse; }
};

PauliHamiltonian pauli_hamiltonian(const IsingModel& model);

/// Dense transition-rate matrix from the pairwise definition, looping over
/// every (i, j) and testing Hamming distance 1.
Eigen::MatrixXd dense_rate_matrix(const Eigen::VectorXd& diagonal, double temperature);

/// exp(-E_i / T) / Z.
Eigen::VectorXd boltzmann(const Eigen::VectorXd& energies, double temperature);

/// Zero-temperature two-level equations for H = -h sigma^z - Gamma sigma^x
/// with L = [[0, 1], [0, -1]] (all weight flows down into |up>, h > 0):
///   du/dt = i h u + i G d + (a/2) [ |d|^2 / u* - i G (d - d* u / u*) ]
///   dd/dt = i G u - i h d + (a/2) [ -d - i G (u - u* d / d*) ]
std::pair<std::complex<double>, std::complex<double>> two_level_rhs(
    double h, double gamma, double alpha, std::complex<double> u, std::complex<double> d);

/// Cyclic Jacobi eigenvalues of a real symmetric matrix, ascending.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd m, double tol = 1e-14, int max_sweeps = 100);

/// Plain fixed-step RK4 for i dc/dt = H(t) c with H(t) from the dense Pauli
/// construction. No renormalization, no dissipative terms.
std::vector<std::complex<double>> schrodinger_rk4(const IsingModel& model,
                                                  const ControlSchedule& schedule,
                                                  std::span<const std::complex<double>> initial,
                                                  double dt);

/// Interpreter for the `exprlist` codegen target. Parses the text and
/// evaluates every `d[i] = (re, im)` line for the given inputs.
std::vector<std::complex<double>> run_exprlist(const std::string& text,
                                               const std::map<std::string, double>& params,
                                               std::span<const std::complex<double>> c);

}  // namespace idqa::verify
