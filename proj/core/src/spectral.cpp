#include "idqa/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "idqa/errors.hpp"

namespace idqa {

Eigen::MatrixXd dense_hamiltonian(const IsingModel& model, double A, double B) {
  const auto dim = static_cast<Eigen::Index>(model.dimension());
  const auto energies = diagonal_energies(model);
  const auto& gamma = model.transverse();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = B * energies[static_cast<std::size_t>(i)];
    for (int b = 0; b < model.spin_count(); ++b) {
      h(i ^ (Eigen::Index{1} << b), i) = -A * gamma[static_cast<std::size_t>(b)];
    }
  }
  return h;
}

namespace {

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index a = 0; a < vectors.cols(); ++a) {
    Eigen::Index best = 0;
    double largest = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      // Tolerance keeps the choice stable against last-bit noise.
      if (std::abs(vectors(i, a)) > largest + 1e-12) {
        largest = std::abs(vectors(i, a));
        best = i;
      }
    }
    if (vectors(best, a) < 0.0) vectors.col(a) *= -1.0;
  }
}

}  // namespace

EigenSystem eigensystem(const IsingModel& model, double A, double B, double s, std::size_t cap) {
  const std::size_t dim = model.dimension();
  if (dim > cap) {
    throw ValidationError("dense eigensolver limited to dimension " + std::to_string(cap) +
                          ", model has " + std::to_string(dim));
  }
  EigenSystem out;
  out.s = s;
  out.A = A;
  out.B = B;
  const auto n = static_cast<Eigen::Index>(dim);
  if (A == 0.0) {
    const auto energies = diagonal_energies(model);
    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return B * energies[x] < B * energies[y];
    });
    out.eigenvalues.resize(n);
    out.eigenvectors = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      const auto idx = order[static_cast<std::size_t>(a)];
      out.eigenvalues(a) = B * energies[idx];
      out.eigenvectors(static_cast<Eigen::Index>(idx), a) = 1.0;
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_hamiltonian(model, A, B));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver did not converge at s = " + std::to_string(s));
  }
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  fix_signs(out.eigenvectors);
  return out;
}

EigenSystem eigensystem(const IsingModel& model, const ScheduleCurves& curves, double s,
                        std::size_t cap) {
  const auto v = eval_curves(curves, s);
  return eigensystem(model, v.A, v.B, s, cap);
}

std::vector<double> gaps(const EigenSystem& eigsys, std::size_t k) {
  if (k >= eigsys.size()) {
    throw ValidationError("requested " + std::to_string(k) + " gaps from " +
                          std::to_string(eigsys.size()) + " eigenvalues");
  }
  std::vector<double> out(k);
  const double ground = eigsys.eigenvalues(0);
  for (std::size_t a = 1; a <= k; ++a) {
    out[a - 1] = std::max(0.0, eigsys.eigenvalues(static_cast<Eigen::Index>(a)) - ground);
  }
  return out;
}

std::vector<double> eigen_overlaps(const StateVector& state, const EigenSystem& eigsys) {
  if (state.dimension() != eigsys.size()) {
    throw ValidationError("state dimension does not match the eigensystem");
  }
  const auto amps = state.amplitudes();
  const Eigen::Map<const Eigen::VectorXcd> psi(amps.data(), static_cast<Eigen::Index>(amps.size()));
  const Eigen::VectorXcd proj = eigsys.eigenvectors.transpose().cast<Complex>() * psi;
  std::vector<double> p(eigsys.size());
  for (std::size_t a = 0; a < p.size(); ++a) p[a] = std::norm(proj(static_cast<Eigen::Index>(a)));
  return p;
}

}  // namespace idqa
