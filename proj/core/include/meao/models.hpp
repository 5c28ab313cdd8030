#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "meao/fockspace.hpp"
#include "meao/rdm.hpp"

namespace meao {

enum class Topology { Chain, Ring, DimerizedRing, Custom };

struct Hopping {
  std::size_t i;
  std::size_t j;
  double t;
};

/// Hubbard-type lattice: H = -Σ_e t_e Σ_σ (f†_iσ f_jσ + h.c.) + Σ_i U_i n_i↑ n_i↓ + Σ_i ε_i n_i
/// restricted to a fixed (N↑, N↓) sector.
struct LatticeSpec {
  std::size_t sites = 0;
  Topology topology = Topology::Custom;
  std::vector<Hopping> hoppings;
  std::vector<double> onsite_u;
  std::vector<double> onsite_energy;
  int n_up = 0;
  int n_down = 0;

  void validate() const;
};

LatticeSpec chain_spec(std::size_t sites, double t, double u, int n_up, int n_down);
LatticeSpec ring_spec(std::size_t sites, double t, double u, int n_up, int n_down);
/// Ring with hoppings alternating t_strong (bonds 0-1, 2-3, ...) and t_weak.
LatticeSpec dimerized_ring_spec(std::size_t sites, double t_strong, double t_weak, double u, int n_up, int n_down);

/// Two-site ionic/covalent model indexed by a separation-like coordinate R.
/// Hopping decays as t0·exp(-R/decay); the ionic configuration (both
/// electrons on site 1) sits delta_inf - 1/R above the covalent one, so it
/// is favoured at short range and crosses the covalent level at
/// R = 1/delta_inf.
struct IonicDimerParams {
  double t0 = 1.0;
  double decay = 2.0;
  double delta_inf = 1.0 / 3.0;
  double u = 1.0;
};
LatticeSpec ionic_dimer_spec(double r, int n_up, int n_down, const IonicDimerParams& params = {});

/// Configurations of one (N↑, N↓) sector in ascending Config order.
struct SectorBasis {
  std::size_t n_orbitals = 0;
  int n_up = 0;
  int n_down = 0;
  std::vector<Config> configs;

  std::size_t dimension() const noexcept { return configs.size(); }
  /// Index of `c`, or dimension() if absent.
  std::size_t find(Config c) const;
};

SectorBasis make_sector_basis(std::size_t n_orbitals, int n_up, int n_down);

struct SectorHamiltonian {
  SectorBasis basis;
  Eigen::SparseMatrix<double> matrix;

  /// max |H - H^T|
  double hermiticity_error() const;
  WaveFunction to_wavefunction(const Eigen::VectorXd& v) const;
};

SectorHamiltonian build_hamiltonian(const LatticeSpec& spec);

struct EigenSolution {
  std::vector<Eigenpair> pairs;  ///< ascending energy
};

struct EigenOptions {
  std::size_t dense_limit = 4096;  ///< dense diagonalization at or below this dimension
  double residual_tolerance = 1e-9;
  std::size_t max_krylov = 400;
  std::uint64_t seed = 7;
};

EigenSolution lowest_eigenstates(const SectorHamiltonian& h, std::size_t k, const EigenOptions& opts = {});

/// Lowest k states over every (N↑, N↓) split of n_particles, for thermal
/// ensembles that mix spin multiplets.
EigenSolution lowest_eigenstates_all_sz(const LatticeSpec& spec, int n_particles, std::size_t k,
                                        const EigenOptions& opts = {});

/// Lanczos with full reorthogonalization, used above the dense limit.
/// Degenerate eigenvectors are found by deflating previously converged ones;
/// the converged set is finally re-diagonalized inside its own span.
struct LanczosResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  double max_residual;
};
LanczosResult lanczos_lowest(const Eigen::SparseMatrix<double>& h, std::size_t k, const EigenOptions& opts = {});

/// Deterministic sign: the largest-magnitude component (first on ties) is made positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v);

/// One row of a parameter scan.
struct ScanRow {
  double parameter;
  std::map<std::string, double> values;
};

/// Evaluates `analysis(family(p))` on every grid point in order.
/// A failing point is rethrown as ScanError carrying the parameter, with the
/// original exception nested.
template <class Family, class Analysis>
std::vector<ScanRow> scan(const std::vector<double>& grid, Family&& family, Analysis&& analysis);

}  // namespace meao

#include "meao/detail/scan_impl.hpp"
