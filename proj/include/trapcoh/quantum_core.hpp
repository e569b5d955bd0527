#ifndef TRAPCOH_QUANTUM_CORE_HPP_
#define TRAPCOH_QUANTUM_CORE_HPP_

// Harmonic-oscillator basis representation of the dimensionless power-law
// Hamiltonian H = P^2 + X^{2l}, with X = a + a^dagger and P = i(a^dagger - a).
// Physical energies follow from E = (hbar * omega / 4) * epsilon, where omega is
// the auxiliary oscillator frequency of the basis.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "trapcoh/error.hpp"

namespace trapcoh {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Truncated HO basis. Operators whose matrix powers are needed are built in
/// the enlarged space of n_basis + guard_band states and cut back afterwards.
struct BasisSpec {
  Index n_basis = 0;
  Index guard_band = 0;

  Index full_dim() const { return n_basis + guard_band; }
};

/// Smallest admissible basis layout for trap order l with n_basis states.
inline BasisSpec basis_for_order(int l, Index n_basis) { return {n_basis, 2 * Index{l}}; }

inline void validate_basis(const BasisSpec& basis, int l) {
  if (l < 1) throw ConfigError("trap order l must be >= 1, got " + std::to_string(l));
  if (basis.n_basis < 2 * Index{l} + 2)
    throw ConfigError("n_basis = " + std::to_string(basis.n_basis) + " is below 2l+2 = " +
                      std::to_string(2 * l + 2));
  if (basis.guard_band < 2 * Index{l})
    throw ConfigError("guard_band = " + std::to_string(basis.guard_band) + " is below 2l = " +
                      std::to_string(2 * l));
}

template <typename Scalar = double>
struct OperatorMatrix {
  Matrix<Scalar> entries;
  int bandwidth = 0;

  Index dim() const { return entries.rows(); }
  Scalar operator()(Index m, Index n) const { return entries(m, n); }
};

/// X = a + a^dagger on the enlarged space (n_basis + guard_band states).
template <typename Scalar = double>
OperatorMatrix<Scalar> position_matrix(const BasisSpec& basis) {
  using std::sqrt;
  if (basis.n_basis < 2) throw ConfigError("position_matrix needs n_basis >= 2");
  const Index dim = basis.full_dim();
  OperatorMatrix<Scalar> x{Matrix<Scalar>::Zero(dim, dim), 1};
  for (Index n = 0; n + 1 < dim; ++n) {
    const Scalar element = sqrt(Scalar(n + 1));
    x.entries(n, n + 1) = element;
    x.entries(n + 1, n) = element;
  }
  return x;
}

/// P^2 = (2n+1) delta_mn - a^2 - (a^dagger)^2 on the retained n_basis states.
/// Its entries need no guard band.
template <typename Scalar = double>
OperatorMatrix<Scalar> momentum_squared_matrix(const BasisSpec& basis) {
  using std::sqrt;
  if (basis.n_basis < 2) throw ConfigError("momentum_squared_matrix needs n_basis >= 2");
  const Index dim = basis.n_basis;
  OperatorMatrix<Scalar> p2{Matrix<Scalar>::Zero(dim, dim), 2};
  for (Index n = 0; n < dim; ++n) {
    p2.entries(n, n) = Scalar(2 * n + 1);
    if (n + 2 < dim) {
      const Scalar element = -sqrt(Scalar((n + 1) * (n + 2)));
      p2.entries(n, n + 2) = element;
      p2.entries(n + 2, n) = element;
    }
  }
  return p2;
}

namespace detail {

// Returns X * a for the tridiagonal X = a + a^dagger in O(dim^2).
template <typename Derived>
Matrix<typename Derived::Scalar> apply_position(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  const Index dim = a.rows();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(dim, a.cols());
  for (Index i = 0; i < dim; ++i) {
    if (i > 0) out.row(i) += sqrt(Scalar(i)) * a.row(i - 1);
    if (i + 1 < dim) out.row(i) += sqrt(Scalar(i + 1)) * a.row(i + 1);
  }
  return out;
}

}  // namespace detail

/// X^k restricted to the retained block. `x` must come from position_matrix
/// with a guard band of at least k so every retained entry is exact.
template <typename Scalar>
OperatorMatrix<Scalar> operator_power(const OperatorMatrix<Scalar>& x, int k,
                                      const BasisSpec& basis) {
  if (k < 1) throw ConfigError("operator_power needs k >= 1");
  if (x.dim() != basis.full_dim())
    throw ConfigError("position operator dimension does not match the basis layout");
  if (basis.guard_band < k)
    throw ConfigError("guard_band = " + std::to_string(basis.guard_band) +
                      " is too small for X^" + std::to_string(k));
  Matrix<Scalar> power = x.entries;
  for (int i = 1; i < k; ++i) power = detail::apply_position(power);
  return {power.topLeftCorner(basis.n_basis, basis.n_basis), k};
}

/// Dimensionless H = P^2 + X^{2l} on the retained block.
template <typename Scalar = double>
OperatorMatrix<Scalar> hamiltonian(int l, const BasisSpec& basis) {
  validate_basis(basis, l);
  const auto x = position_matrix<Scalar>(basis);
  auto h = momentum_squared_matrix<Scalar>(basis);
  h.entries += operator_power(x, 2 * l, basis).entries;
  h.bandwidth = std::max(2, 2 * l);
  return h;
}

enum class Parity { even, odd };

template <typename Scalar = double>
struct TrapSpectrum {
  int l = 1;
  BasisSpec basis;
  Vector<Scalar> epsilon;   // ascending dimensionless eigenvalues
  Matrix<Scalar> vectors;   // column k is eigenvector k in the HO basis
  std::vector<Parity> parity;
  Index converged_count = 0;

  Index size() const { return epsilon.size(); }
};

namespace detail {

template <typename Scalar>
struct BlockSolution {
  Vector<Scalar> values;
  Matrix<Scalar> vectors;  // full-length vectors, zero outside the block
  std::vector<Parity> parity;
};

// Diagonalizes the even and odd HO-index blocks separately (H never couples
// them) and merges the result in ascending order.
template <typename Scalar>
BlockSolution<Scalar> solve_parity_blocks(const Matrix<Scalar>& h, bool with_vectors) {
  const Index dim = h.rows();
  BlockSolution<Scalar> out;
  std::vector<Scalar> values;
  std::vector<Vector<Scalar>> vecs;
  for (Parity p : {Parity::even, Parity::odd}) {
    std::vector<Index> idx;
    for (Index i = (p == Parity::even ? 0 : 1); i < dim; i += 2) idx.push_back(i);
    if (idx.empty()) continue;
    const Matrix<Scalar> block = h(idx, idx);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(
        block, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw NumericError("symmetric eigensolver failed to converge");
    for (Index j = 0; j < block.rows(); ++j) {
      values.push_back(solver.eigenvalues()(j));
      out.parity.push_back(p);
      if (with_vectors) {
        Vector<Scalar> v = Vector<Scalar>::Zero(dim);
        v(idx) = solver.eigenvectors().col(j);
        vecs.push_back(std::move(v));
      }
    }
  }
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values[a] < values[b]; });

  out.values.resize(static_cast<Index>(values.size()));
  std::vector<Parity> parity(order.size());
  if (with_vectors) out.vectors.resize(dim, static_cast<Index>(values.size()));
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto src = static_cast<std::size_t>(order[k]);
    out.values(static_cast<Index>(k)) = values[src];
    parity[k] = out.parity[src];
    if (with_vectors) {
      Vector<Scalar> v = vecs[src];
      // Sign convention: the largest-magnitude component is positive.
      Index imax = 0;
      v.cwiseAbs().maxCoeff(&imax);
      if (v(imax) < Scalar(0)) v = -v;
      out.vectors.col(static_cast<Index>(k)) = v;
    }
  }
  out.parity = std::move(parity);
  return out;
}

}  // namespace detail

/// Full eigendecomposition of H. States are flagged converged (leading run)
/// while their eigenvalue moves by less than `tol` (relative) when the basis
/// is doubled.
template <typename Scalar>
TrapSpectrum<Scalar> diagonalize(const OperatorMatrix<Scalar>& h, int l,
                                 Scalar tol = Scalar(1e-8)) {
  using std::abs;
  if (h.dim() < 2) throw ConfigError("Hamiltonian must have at least 2 states");
  const Scalar asymmetry = (h.entries - h.entries.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > Scalar(1e-12) * h.entries.cwiseAbs().maxCoeff())
    throw ConfigError("Hamiltonian is not symmetric");

  TrapSpectrum<Scalar> spec;
  spec.l = l;
  spec.basis = {h.dim(), 2 * Index{l}};
  auto solution = detail::solve_parity_blocks(h.entries, true);
  spec.epsilon = std::move(solution.values);
  spec.vectors = std::move(solution.vectors);
  spec.parity = std::move(solution.parity);

  const BasisSpec doubled{2 * h.dim(), 2 * Index{l}};
  const auto reference = detail::solve_parity_blocks(hamiltonian<Scalar>(l, doubled).entries, false);
  Index count = 0;
  while (count < spec.size()) {
    const Scalar ref = reference.values(count);
    if (abs(spec.epsilon(count) - ref) >= tol * abs(ref)) break;
    ++count;
  }
  spec.converged_count = count;
  return spec;
}

/// Builds and diagonalizes H for trap order l.
template <typename Scalar = double>
TrapSpectrum<Scalar> solve_trap(int l, Index n_basis, Scalar tol = Scalar(1e-8)) {
  const BasisSpec basis = basis_for_order(l, n_basis);
  auto spec = diagonalize(hamiltonian<Scalar>(l, basis), l, tol);
  spec.basis = basis;
  return spec;
}

}  // namespace trapcoh

#endif  // TRAPCOH_QUANTUM_CORE_HPP_
