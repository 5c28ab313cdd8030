#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "meao/partition.hpp"
#include "meao/rdm.hpp"

namespace meao {

/// (n_bonding - n_antibonding) / 2, occupations in [0, 2].
double effective_bond_order(double n_bonding, double n_antibonding);

/// δ_AB = 2(<N_A><N_B> - <N_A N_B>) with N_X the particle number on the
/// orbital set X.
double delocalization_index(const MixedState& state, const std::vector<std::size_t>& a,
                            const std::vector<std::size_t>& b);

/// Symmetric table of pairwise δ between labelled regions. The diagonal is
/// unused and kept at zero.
struct DeltaTable {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;

  std::size_t index_of(const std::string& label) const;
  double operator()(const std::string& a, const std::string& b) const;
};

DeltaTable delta_table(const MixedState& state, const AtomicPartition& partition);

/// Ordered ring of atom labels, at least three, all distinct.
struct RingSpec {
  std::vector<std::string> atoms;

  void validate() const;
};

struct FluOptions {
  double reference = 1.389;  ///< default δ_ref for every ring bond
  /// Per-bond references keyed by (label, label) in either order.
  std::map<std::pair<std::string, std::string>, double> overrides;
  bool squared = false;  ///< square the (δ - δ_ref)/δ_ref bracket

  double reference_for(const std::string& a, const std::string& b) const;
};

/// (1/N) Σ_i (V_i/V_{i-1})^α (δ_{A_i A_{i-1}} - δ_ref)/δ_ref, α = +1 when
/// V_i > V_{i-1} and -1 otherwise, V_i = Σ_{j≠i} δ_{A_i A_j} over every
/// region in the table.
double flu(const DeltaTable& delta, const RingSpec& ring, const FluOptions& opts = {});

/// Natural occupations and per-atom overlap matrices in the natural-orbital
/// basis.
struct AtomicOverlaps {
  Eigen::VectorXd occupations;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> atoms;

  /// Square, matching sizes, occupations in [0, 2], Σ_A S(A) = 1 within 1e-8.
  void validate() const;
  const Eigen::MatrixXd& overlap(const std::string& label) const;
};

/// Tr Π_m [diag(n) S(A_m)] over the ring in order.
double i_ring(const AtomicOverlaps& overlaps, const RingSpec& ring);

/// (1/2N) Σ over all N! orderings of the ring atoms of I_ring. N ≤ 8.
double mci(const AtomicOverlaps& overlaps, const RingSpec& ring, unsigned threads = 1);
inline constexpr std::size_t kMaxMciAtoms = 8;

/// 1 - (α/N) Σ (R_opt - R_i)². Defaults are the usual CC constants (Å).
double homa(const std::vector<double>& bond_lengths, double r_opt = 1.388, double alpha = 257.7);

}  // namespace meao
