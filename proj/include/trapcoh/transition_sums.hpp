#ifndef TRAPCOH_TRANSITION_SUMS_HPP_
#define TRAPCOH_TRANSITION_SUMS_HPP_

// Matrix elements |<m|X^k|n>|^2 between trap eigenstates and their sums,
// plain or weighted by a noise spectrum at each transition frequency.

#include <cmath>
#include <string>
#include <vector>

#include "trapcoh/noise.hpp"
#include "trapcoh/quantum_core.hpp"

namespace trapcoh {

template <typename Scalar = double>
struct TransitionEntry {
  Index m = 0;
  Scalar omega_dimless = 0;  // epsilon_m - epsilon_n
  Scalar element_sq = 0;     // |<m|X^k|n>|^2
  bool converged = false;    // m < converged_count
};

template <typename Scalar = double>
struct TransitionTable {
  Index from_state = 0;
  int k = 1;
  std::vector<TransitionEntry<Scalar>> entries;  // every m != n in the basis
  Scalar diagonal_sq = 0;                        // |<n|X^k|n>|^2
  Scalar closure_reference = 0;                  // <n|X^{2k}|n>, 0 if not computed
  Scalar closure_defect = 0;                     // relative, 0 if not computed

  bool closure_ok(Scalar tolerance = Scalar(1e-6)) const { return closure_defect < tolerance; }
};

/// Table of transitions out of state n for the operator `xk` = X^k
/// (retained block, same dimension as the spectrum basis).
template <typename Scalar>
TransitionTable<Scalar> transition_table(const TrapSpectrum<Scalar>& spec,
                                         const OperatorMatrix<Scalar>& xk, int k, Index n) {
  if (n < 0 || n >= spec.converged_count)
    throw ConfigError("state " + std::to_string(n) + " is not converged (converged_count = " +
                      std::to_string(spec.converged_count) + ")");
  if (xk.dim() != spec.vectors.rows())
    throw ConfigError("operator dimension does not match the spectrum basis");

  TransitionTable<Scalar> table;
  table.from_state = n;
  table.k = k;
  const Vector<Scalar> xv = xk.entries * spec.vectors.col(n);
  const Vector<Scalar> elements = spec.vectors.transpose() * xv;
  table.entries.reserve(static_cast<std::size_t>(spec.size()));
  for (Index m = 0; m < spec.size(); ++m) {
    const Scalar sq = elements(m) * elements(m);
    if (m == n) {
      table.diagonal_sq = sq;
      continue;
    }
    table.entries.push_back({m, spec.epsilon(m) - spec.epsilon(n), sq, m < spec.converged_count});
  }
  return table;
}

/// Builds X^k and X^{2k} internally (guard band widened as needed) and fills
/// in the closure check  sum_m |<m|X^k|n>|^2 = <n|X^{2k}|n>.
template <typename Scalar>
TransitionTable<Scalar> transition_table(const TrapSpectrum<Scalar>& spec, int k, Index n) {
  using std::abs;
  const BasisSpec basis{spec.vectors.rows(), std::max<Index>(spec.basis.guard_band, 2 * k)};
  const auto x = position_matrix<Scalar>(basis);
  auto table = transition_table(spec, operator_power(x, k, basis), k, n);
  const auto x2k = operator_power(x, 2 * k, basis);
  const Vector<Scalar> vn = spec.vectors.col(n);
  table.closure_reference = vn.dot(x2k.entries * vn);
  Scalar total = table.diagonal_sq;
  for (const auto& e : table.entries) total += e.element_sq;
  table.closure_defect = abs(total - table.closure_reference) / abs(table.closure_reference);
  return table;
}

/// Sum over converged m != n of |<m|X^k|n>|^2.
template <typename Scalar>
Scalar plain_sum(const TransitionTable<Scalar>& table) {
  Scalar total = 0;
  for (const auto& e : table.entries)
    if (e.converged) total += e.element_sq;
  return total;
}

/// Sum over converged m != n of S(|omega_mn|) |<m|X^k|n>|^2 with the physical
/// transition frequency omega_mn = (omega_aux / 4)(epsilon_m - epsilon_n).
template <typename Scalar>
Scalar weighted_sum(const TransitionTable<Scalar>& table, const NoiseSpectrum& s,
                    double omega_aux) {
  using std::abs;
  if (!(omega_aux > 0)) throw ConfigError("auxiliary frequency must be positive");
  Scalar total = 0;
  for (const auto& e : table.entries) {
    if (!e.converged) continue;
    const double omega_mn = omega_aux / 4.0 * static_cast<double>(abs(e.omega_dimless));
    total += Scalar(evaluate(s, omega_mn)) * e.element_sq;
  }
  return total;
}

}  // namespace trapcoh

#endif  // TRAPCOH_TRANSITION_SUMS_HPP_
