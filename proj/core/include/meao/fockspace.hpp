#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace meao {

using Complex = std::complex<double>;

/// Occupation-number configuration of 2n spin-orbitals. Mode p = 2*orbital +
/// spin (spin-up = 0, spin-down = 1) is stored in bit p. This orbital-major,
/// up-before-down ordering fixes every fermionic sign in the library.
using Config = std::uint64_t;

inline constexpr std::size_t kMaxOrbitals = 32;

enum class Spin : int { Up = 0, Down = 1 };

constexpr std::size_t mode_index(std::size_t orbital, Spin spin) noexcept {
  return 2 * orbital + static_cast<std::size_t>(spin);
}

constexpr bool occupied(Config c, std::size_t mode) noexcept { return (c >> mode) & 1U; }

int particle_count(Config c) noexcept;
int spin_count(Config c, Spin spin) noexcept;

/// Result of applying a single creation or annihilation operator.
struct SignedConfig {
  Config config;
  int sign;
};

/// f_p |c>; empty when mode p is unoccupied.
std::optional<SignedConfig> annihilate(Config c, std::size_t mode) noexcept;
/// f†_p |c>; empty when mode p is already occupied.
std::optional<SignedConfig> create(Config c, std::size_t mode) noexcept;

/// Parses a 2n-character 0/1 string; character p is mode p.
Config config_from_string(std::string_view bits);
std::string config_to_string(Config c, std::size_t n_orbitals);

/// Sparse many-fermion state over n spatial orbitals.
///
/// Amplitudes live in an ordered map so that iteration, and everything
/// serialized from it, is deterministic.
class WaveFunction {
 public:
  using AmplitudeMap = std::map<Config, Complex>;

  explicit WaveFunction(std::size_t n_orbitals, double drop_tolerance = 1e-14);

  std::size_t n_orbitals() const noexcept { return n_orbitals_; }
  double drop_tolerance() const noexcept { return drop_tolerance_; }
  const AmplitudeMap& amplitudes() const noexcept { return amps_; }
  std::size_t size() const noexcept { return amps_.size(); }

  Complex amplitude(Config c) const;
  void set(Config c, Complex value);
  void add(Config c, Complex value);

  double norm() const;
  void normalize();
  /// Removes entries with magnitude below the drop tolerance.
  void prune();

  /// (N_up, N_down) shared by all configurations, if any.
  std::optional<std::pair<int, int>> sector() const;
  bool is_real(double tol = 0.0) const;

  /// <this|other>
  Complex overlap(const WaveFunction& other) const;

 private:
  std::size_t n_orbitals_;
  double drop_tolerance_;
  AmplitudeMap amps_;
};

/// Dense pure state of K distinguishable parties (qubits, qudits).
/// Party 0 is the most significant digit of the flat index.
struct QuditState {
  std::vector<std::size_t> local_dims;
  Eigen::VectorXcd amplitudes;

  QuditState(std::vector<std::size_t> dims, Eigen::VectorXcd amps);
  std::size_t parties() const noexcept { return local_dims.size(); }
  /// Amplitude of the basis string `digits` (one entry per party).
  Complex amplitude(std::span<const std::size_t> digits) const;
};

struct JacobiStep {
  std::size_t k;
  std::size_t l;
  double theta;
};

/// n×n Jacobi matrix with J_kk = J_ll = cos θ, J_lk = sin θ, J_kl = -sin θ.
/// Applied to orbitals, e_k -> cos θ e_k + sin θ e_l.
Eigen::MatrixXd jacobi_matrix(std::size_t n, std::size_t k, std::size_t l, double theta);

/// Ordered list of Jacobi rotations on spatial-orbital pairs together with
/// their accumulated orthogonal matrix U = J_m ... J_2 J_1.
class RotationSchedule {
 public:
  explicit RotationSchedule(std::size_t n_orbitals);

  void append(std::size_t k, std::size_t l, double theta);
  void append(const RotationSchedule& other);

  std::size_t n_orbitals() const noexcept { return n_; }
  const std::vector<JacobiStep>& steps() const noexcept { return steps_; }
  const Eigen::MatrixXd& matrix() const noexcept { return u_; }
  bool empty() const noexcept { return steps_.empty(); }

 private:
  std::size_t n_;
  std::vector<JacobiStep> steps_;
  Eigen::MatrixXd u_;
};

/// 2-orbital, 2-electron singlet that is maximally entangled between the
/// two orbitals: (|0,↑↓> + |↑,↓> - |↓,↑> + |↑↓,0>)/2.
WaveFunction ideal_bond_state();

/// Both electrons of the bond in orbital 0: |↑↓> ⊗ |0>.
WaveFunction bonding_product_state();

/// Ionic/covalent family with overlap p on the ionic configuration |0,↑↓>;
/// p = 1/2 is the ideal bond, p = 1 the fully ionic product state.
WaveFunction ionic_state(double p);

QuditState ghz_state(std::size_t k);
QuditState w_state(std::size_t k);

/// Applies exp(θ G_kl) per step, with G_kl = Σ_σ (f†_lσ f_kσ - f†_kσ f_lσ),
/// so that f†_k -> cos θ f†_k + sin θ f†_l. Uses the closed form
/// exp(θG) = 1 + sin θ G + (1 - cos θ) G², exact because G³ = -G per spin.
WaveFunction rotate_wavefunction(const WaveFunction& wf, const RotationSchedule& schedule);

/// Single-step convenience wrapper around rotate_wavefunction.
WaveFunction rotate_wavefunction(const WaveFunction& wf, std::size_t k, std::size_t l, double theta);

}  // namespace meao
