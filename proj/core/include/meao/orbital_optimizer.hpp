#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "meao/fockspace.hpp"
#include "meao/partition.hpp"
#include "meao/rdm.hpp"

namespace meao {

/// Proxy objective for inter-atom pair entanglement:
///   F = Σ_{i<j, atom(i) != atom(j)} |Γ^{i↑,i↓}_{j↑,j↓}|² + |Γ^{i↑,j↓}_{j↑,i↓}|².
double f_meao(const TwoRDM& gamma, const AtomicPartition& partition);

/// Four-index congruence of Γ by the Jacobi matrix J^(kl)(θ), matching the
/// effect of rotate_wavefunction(wf, k, l, θ) on two_rdm_mixed(wf).
TwoRDM rotate_2rdm_jacobi(const TwoRDM& gamma, std::size_t k, std::size_t l, double theta);
void rotate_2rdm_jacobi_inplace(TwoRDM& gamma, std::size_t k, std::size_t l, double theta);
TwoRDM rotate_2rdm(const TwoRDM& gamma, const RotationSchedule& schedule);

/// dF/dθ_kl at θ = 0 for each requested rotation pair.
std::vector<double> f_gradient(const TwoRDM& gamma, const AtomicPartition& partition,
                               std::span<const OrbitalPair> pairs);
/// Same, over the intra-atom pairs of the partition.
std::vector<double> f_gradient(const TwoRDM& gamma, const AtomicPartition& partition);

/// d²F/dθ_kl² at θ = 0 for each requested rotation pair.
std::vector<double> f_hessian_diag(const TwoRDM& gamma, const AtomicPartition& partition,
                                   std::span<const OrbitalPair> pairs);
std::vector<double> f_hessian_diag(const TwoRDM& gamma, const AtomicPartition& partition);

/// Value, first and second derivative of F along one Jacobi direction.
struct DirectionalDerivatives {
  double value;
  double gradient;
  double curvature;
};
DirectionalDerivatives f_directional(const TwoRDM& gamma, const AtomicPartition& partition, std::size_t k,
                                     std::size_t l);

/// Γ^{i↑,j↓}_{k↑,l↓} = γ↑_ik γ↓_jl (single-determinant factorization).
TwoRDM mean_field_2rdm(const OneRDM& gamma);

enum class RotationSpace {
  IntraAtom,  ///< rotations only mix orbitals of the same atom
  AllPairs,   ///< any orbital pair; for inputs whose orbitals are not atom-adapted
};

struct OptimizerOptions {
  double tolerance = 1e-10;  ///< stop when F improves by less than this in a sweep
  int max_sweeps = 200;
  int restarts = 8;          ///< restart 0 is the unperturbed input
  std::uint64_t seed = 0;
  double damping = 1.0;      ///< gradient-ascent step θ = damping·g on non-concave directions
  double restart_scale = 0.3;
  RotationSpace rotation_space = RotationSpace::IntraAtom;

  void validate() const;
};

struct RestartSummary {
  double f_final;
  int sweeps;
  int accepted_steps;
  bool converged;
};

struct MeaoResult {
  RotationSchedule schedule;  ///< restart perturbation followed by the accepted steps
  double f_final;
  std::vector<double> history;  ///< F before the first sweep, then after each sweep
  bool converged;
  int sweeps;
  int accepted_steps;
  std::size_t best_restart;
  std::vector<RestartSummary> restarts;
};

std::vector<OrbitalPair> rotation_pairs(const AtomicPartition& partition, RotationSpace space);

MeaoResult optimize_meao(const TwoRDM& gamma, const AtomicPartition& partition, const OptimizerOptions& opts = {});

}  // namespace meao
