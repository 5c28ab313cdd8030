#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "meao/fockspace.hpp"
#include "meao/rdm.hpp"

namespace meao {

/// A correlation or entanglement value in nats together with the constant it
/// is normalized by.
struct EntanglementReport {
  std::vector<std::vector<std::size_t>> subsets;
  double raw = 0.0;
  double normalized = 0.0;
  double normalization = 1.0;
};

/// log 4: maximal entanglement of a single spatial orbital.
double orbital_max_entropy();
/// 2 log 4: maximal mutual information between two orbitals.
double max_mutual_information();

/// -Σ λ log λ (natural log). Eigenvalues in [-1e-10, 0) are clamped to zero.
double entropy_of_spectrum(std::span<const double> eigenvalues);
double von_neumann_entropy(const DensityOperator& rho);

/// Entropy of the reduction of `state` onto `subset`.
double subset_entropy(const MixedState& state, std::span<const std::size_t> subset);

/// I_ij = S(ρ_i) + S(ρ_j) - S(ρ_ij), normalized by 2 log 4.
EntanglementReport mutual_information(const MixedState& state, std::size_t i, std::size_t j);

/// Entropy of entanglement of a pure state across subset | complement.
EntanglementReport pure_bipartite_entanglement(const WaveFunction& wf, std::span<const std::size_t> subset);
/// Same for a qudit state; `subset` lists party indices.
EntanglementReport pure_bipartite_entanglement(const QuditState& psi, std::span<const std::size_t> subset);

/// Reduced density matrix of a qudit state on a set of parties (in the given
/// order).
Eigen::MatrixXcd reduced_qudit_density(const QuditState& psi, std::span<const std::size_t> parties);

/// Genuine multipartite entanglement of a pure state: the minimum, over all
/// bipartitions that keep each party whole, of the smaller side's entropy.
/// `parties` must partition the state's orbitals (or qudits). The reported
/// subsets are the lexicographically smallest minimizing bipartition.
EntanglementReport gme(const WaveFunction& wf, const std::vector<std::vector<std::size_t>>& parties);
EntanglementReport gme(const QuditState& psi, const std::vector<std::vector<std::size_t>>& parties);

/// Minimum-bipartition entropy for a set of disjoint orbital parties that
/// need not cover the whole state. Meaningful as GME only when the union of
/// the parties is in a pure state; the caller is responsible for checking.
EntanglementReport min_bipartition_entropy(const MixedState& state,
                                           const std::vector<std::vector<std::size_t>>& parties);

inline constexpr std::size_t kMaxGmeParties = 14;

}  // namespace meao
