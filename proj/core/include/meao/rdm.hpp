#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "meao/fockspace.hpp"

namespace meao {

/// Per-spin one-particle density matrices, gamma^σ_ik = <f†_iσ f_kσ>.
struct OneRDM {
  Eigen::MatrixXcd up;
  Eigen::MatrixXcd down;

  std::size_t n_orbitals() const noexcept { return static_cast<std::size_t>(up.rows()); }
  const Eigen::MatrixXcd& spin(Spin s) const noexcept { return s == Spin::Up ? up : down; }
};

/// Mixed-spin sector of the 2RDM, Γ^{i↑,j↓}_{k↑,l↓} = <f†_i↑ f†_j↓ f_l↓ f_k↑>,
/// stored densely with index ((i*n + j)*n + k)*n + l.
class TwoRDM {
 public:
  explicit TwoRDM(std::size_t n_orbitals);

  std::size_t n_orbitals() const noexcept { return n_; }

  Complex& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) noexcept {
    return data_[index(i, j, k, l)];
  }
  const Complex& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const noexcept {
    return data_[index(i, j, k, l)];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const noexcept {
    return ((i * n_ + j) * n_ + k) * n_ + l;
  }

  /// Σ_ij Γ^{i↑,j↓}_{i↑,j↓} = N↑ N↓ for number eigenstates.
  Complex trace() const;
  /// max |Γ^{ij}_{kl} - conj(Γ^{kl}_{ij})|
  double hermiticity_error() const;
  bool all_finite() const;

 private:
  std::size_t n_;
  std::vector<Complex> data_;
};

/// Hermitian, unit-trace operator on the 4^|subset| Fock space of an
/// ordered orbital subset. Local basis per orbital: |0>, |↑>, |↓>, |↑↓>;
/// the first subset orbital is the most significant base-4 digit.
struct DensityOperator {
  std::vector<std::size_t> subset;
  Eigen::MatrixXcd matrix;
};

/// Convex ensemble of pure states.
class MixedState {
 public:
  struct Member {
    double weight;
    WaveFunction state;
  };

  MixedState(std::vector<Member> members);
  /// A pure state as a single-member ensemble.
  MixedState(WaveFunction pure);  // NOLINT(google-explicit-constructor)

  const std::vector<Member>& members() const noexcept { return members_; }
  std::size_t n_orbitals() const noexcept { return members_.front().state.n_orbitals(); }
  bool is_pure() const noexcept { return members_.size() == 1; }

 private:
  std::vector<Member> members_;
};

OneRDM one_rdm(const WaveFunction& wf);
OneRDM one_rdm(const MixedState& state);
TwoRDM two_rdm_mixed(const WaveFunction& wf);
TwoRDM two_rdm_mixed(const MixedState& state);

/// Exact fermionic partial trace onto `subset`. Modes are reordered so the
/// subset comes first (with its own ordering), and the permutation parity of
/// the occupied modes is folded into each amplitude before tracing out the
/// complement.
DensityOperator reduced_density_operator(const WaveFunction& wf, std::span<const std::size_t> subset);
DensityOperator reduced_density_operator(const MixedState& state, std::span<const std::size_t> subset);

/// Eigenvalues of the reduced density operator on `subset`. Uses the local
/// (n↑, n↓) block structure when every ensemble member sits in a single
/// (N↑, N↓) sector, otherwise falls back to the dense matrix.
std::vector<double> reduced_spectrum(const MixedState& state, std::span<const std::size_t> subset);

/// Tr ρ² of the subset reduction.
double reduced_purity(const MixedState& state, std::span<const std::size_t> subset);

struct Eigenpair {
  double energy;
  WaveFunction state;
};

/// Boltzmann ensemble e^{-β(E_i - E_min)} / Z over the supplied states.
MixedState thermal_state(std::span<const Eigenpair> eigenpairs, double beta);

}  // namespace meao
