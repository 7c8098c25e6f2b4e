#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "idqa/dynamics.hpp"
#include "idqa/ising.hpp"
#include "idqa/schedule.hpp"

namespace idqa {

/// Instantaneous eigen-decomposition of H(s) = B(s) H_c + A(s) H_q.
/// H is real symmetric in the z-basis, so the eigenvectors are real.
struct EigenSystem {
  double s = 0.0;
  double A = 0.0;
  double B = 0.0;
  /// Ascending.
  Eigen::VectorXd eigenvalues;
  /// Column a is the eigenvector for eigenvalues[a]. Each column's largest
  /// component (first one on ties) is positive.
  Eigen::MatrixXd eigenvectors;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

inline constexpr std::size_t kDenseSolverCap = 4096;

/// Dense Hamiltonian matrix for the given controls.
Eigen::MatrixXd dense_hamiltonian(const IsingModel& model, double A, double B);

/// At A = 0 the Hamiltonian is diagonal and the decomposition is the sorted
/// classical spectrum with unit eigenvectors (ties keep basis order).
/// Throws ValidationError above the dense cap and NumericalError if the
/// solver does not converge.
EigenSystem eigensystem(const IsingModel& model, double A, double B, double s = 0.0,
                        std::size_t cap = kDenseSolverCap);

EigenSystem eigensystem(const IsingModel& model, const ScheduleCurves& curves, double s,
                        std::size_t cap = kDenseSolverCap);

/// lambda_a - lambda_0 for a = 1..k.
std::vector<double> gaps(const EigenSystem& eigsys, std::size_t k);

/// p_a = |<v_a|psi>|^2.
std::vector<double> eigen_overlaps(const StateVector& state, const EigenSystem& eigsys);

}  // namespace idqa
