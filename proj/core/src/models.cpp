#include "meao/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "meao/error.hpp"

namespace meao {

void LatticeSpec::validate() const {
  if (sites == 0 || sites > kMaxOrbitals) throw InputError("lattice needs 1.." + std::to_string(kMaxOrbitals) + " sites");
  if (onsite_u.size() != sites || onsite_energy.size() != sites)
    throw InputError("on-site U and energy lists must have one entry per site");
  if (n_up < 0 || n_down < 0 || static_cast<std::size_t>(n_up) > sites || static_cast<std::size_t>(n_down) > sites)
    throw InputError("particle numbers must satisfy 0 <= N_sigma <= sites");
  for (const auto& h : hoppings) {
    if (h.i >= sites || h.j >= sites) throw InputError("hopping references a site out of range");
    if (h.i == h.j) throw InputError("hopping must join two distinct sites");
    if (!std::isfinite(h.t)) throw InputError("hopping amplitude must be finite");
  }
  for (std::size_t s = 0; s < sites; ++s)
    if (!std::isfinite(onsite_u[s]) || !std::isfinite(onsite_energy[s]))
      throw InputError("on-site parameters must be finite");
}

namespace {

LatticeSpec uniform(std::size_t sites, Topology topo, double u, int n_up, int n_down) {
  LatticeSpec s;
  s.sites = sites;
  s.topology = topo;
  s.onsite_u.assign(sites, u);
  s.onsite_energy.assign(sites, 0.0);
  s.n_up = n_up;
  s.n_down = n_down;
  return s;
}

}  // namespace

LatticeSpec chain_spec(std::size_t sites, double t, double u, int n_up, int n_down) {
  auto s = uniform(sites, Topology::Chain, u, n_up, n_down);
  for (std::size_t i = 0; i + 1 < sites; ++i) s.hoppings.push_back({i, i + 1, t});
  s.validate();
  return s;
}

LatticeSpec ring_spec(std::size_t sites, double t, double u, int n_up, int n_down) {
  if (sites < 3) return chain_spec(sites, t, u, n_up, n_down);
  auto s = uniform(sites, Topology::Ring, u, n_up, n_down);
  for (std::size_t i = 0; i < sites; ++i) s.hoppings.push_back({i, (i + 1) % sites, t});
  s.validate();
  return s;
}

LatticeSpec dimerized_ring_spec(std::size_t sites, double t_strong, double t_weak, double u, int n_up, int n_down) {
  if (sites < 4 || sites % 2 != 0) throw InputError("dimerized ring needs an even number of sites >= 4");
  auto s = uniform(sites, Topology::DimerizedRing, u, n_up, n_down);
  for (std::size_t i = 0; i < sites; ++i) s.hoppings.push_back({i, (i + 1) % sites, i % 2 == 0 ? t_strong : t_weak});
  s.validate();
  return s;
}

LatticeSpec ionic_dimer_spec(double r, int n_up, int n_down, const IonicDimerParams& params) {
  if (!(r > 0.0)) throw InputError("ionic dimer coordinate must be positive");
  LatticeSpec s;
  s.sites = 2;
  s.topology = Topology::Custom;
  s.hoppings = {{0, 1, params.t0 * std::exp(-r / params.decay)}};
  s.onsite_u = {params.u, params.u};
  const double ionic_gap = params.delta_inf - 1.0 / r;
  // E(0,↑↓) - E(↑,↓) = ε_1 + U - ε_0 = ionic_gap
  s.onsite_energy = {0.0, ionic_gap - params.u};
  s.n_up = n_up;
  s.n_down = n_down;
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------

std::size_t SectorBasis::find(Config c) const {
  auto it = std::lower_bound(configs.begin(), configs.end(), c);
  return (it != configs.end() && *it == c) ? static_cast<std::size_t>(it - configs.begin()) : configs.size();
}

namespace {

void combinations(std::size_t n, int k, std::vector<std::uint32_t>& out) {
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
    if (std::popcount(m) == k) out.push_back(static_cast<std::uint32_t>(m));
}

Config interleave(std::uint32_t up, std::uint32_t down, std::size_t n) {
  Config c = 0;
  for (std::size_t o = 0; o < n; ++o) {
    if ((up >> o) & 1U) c |= Config{1} << mode_index(o, Spin::Up);
    if ((down >> o) & 1U) c |= Config{1} << mode_index(o, Spin::Down);
  }
  return c;
}

}  // namespace

SectorBasis make_sector_basis(std::size_t n_orbitals, int n_up, int n_down) {
  if (n_orbitals > 24) throw InputError("sector enumeration limited to 24 orbitals");
  std::vector<std::uint32_t> ups, downs;
  combinations(n_orbitals, n_up, ups);
  combinations(n_orbitals, n_down, downs);
  SectorBasis b{n_orbitals, n_up, n_down, {}};
  b.configs.reserve(ups.size() * downs.size());
  for (auto u : ups)
    for (auto d : downs) b.configs.push_back(interleave(u, d, n_orbitals));
  std::sort(b.configs.begin(), b.configs.end());
  return b;
}

double SectorHamiltonian::hermiticity_error() const {
  const Eigen::SparseMatrix<double> diff = matrix - Eigen::SparseMatrix<double>(matrix.transpose());
  double err = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it) err = std::max(err, std::abs(it.value()));
  return err;
}

WaveFunction SectorHamiltonian::to_wavefunction(const Eigen::VectorXd& v) const {
  WaveFunction wf(basis.n_orbitals);
  for (std::size_t q = 0; q < basis.dimension(); ++q) wf.set(basis.configs[q], v[static_cast<Eigen::Index>(q)]);
  wf.prune();
  return wf;
}

SectorHamiltonian build_hamiltonian(const LatticeSpec& spec) {
  spec.validate();
  SectorHamiltonian h{make_sector_basis(spec.sites, spec.n_up, spec.n_down), {}};
  const std::size_t dim = h.basis.dimension();
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t col = 0; col < dim; ++col) {
    const Config c = h.basis.configs[col];
    double diag = 0.0;
    for (std::size_t s = 0; s < spec.sites; ++s) {
      const bool up = occupied(c, mode_index(s, Spin::Up)), dn = occupied(c, mode_index(s, Spin::Down));
      if (up && dn) diag += spec.onsite_u[s];
      diag += spec.onsite_energy[s] * (static_cast<int>(up) + static_cast<int>(dn));
    }
    if (diag != 0.0) triplets.emplace_back(col, col, diag);
    for (const auto& hop : spec.hoppings) {
      for (int sp = 0; sp < 2; ++sp) {
        const auto spin = static_cast<Spin>(sp);
        for (auto [to, from] : {std::pair{hop.i, hop.j}, std::pair{hop.j, hop.i}}) {
          auto x = annihilate(c, mode_index(from, spin));
          if (!x) continue;
          auto y = create(x->config, mode_index(to, spin));
          if (!y) continue;
          const std::size_t row = h.basis.find(y->config);
          triplets.emplace_back(row, col, -hop.t * x->sign * y->sign);
        }
      }
    }
  }
  h.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.matrix.setFromTriplets(triplets.begin(), triplets.end());
  h.matrix.makeCompressed();
  return h;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index q = 0; q < v.size(); ++q) {
    // Components within round-off of the maximum count as ties.
    if (std::abs(v[q]) > best + 1e-10) {
      best = std::abs(v[q]);
      arg = q;
    }
  }
  if (v.size() > 0 && v[arg] < 0.0) v = -v;
}

EigenSolution lowest_eigenstates(const SectorHamiltonian& h, std::size_t k, const EigenOptions& opts) {
  const std::size_t dim = h.basis.dimension();
  if (k < 1 || k > dim) throw ContractError("requested " + std::to_string(k) + " eigenstates of a " +
                                            std::to_string(dim) + "-dimensional sector");
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  if (dim <= opts.dense_limit) {
    const Eigen::MatrixXd dense(h.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed", 0.0);
    values = es.eigenvalues().head(static_cast<Eigen::Index>(k));
    vectors = es.eigenvectors().leftCols(static_cast<Eigen::Index>(k));
  } else {
    auto lz = lanczos_lowest(h.matrix, k, opts);
    values = std::move(lz.values);
    vectors = std::move(lz.vectors);
  }
  EigenSolution sol;
  for (Eigen::Index q = 0; q < values.size(); ++q) {
    Eigen::VectorXd v = vectors.col(q);
    fix_sign(v);
    const double residual = (h.matrix * v - values[q] * v).norm();
    if (residual > opts.residual_tolerance) throw SolverError("eigenpair residual above tolerance", residual);
    sol.pairs.push_back({values[q], h.to_wavefunction(v)});
  }
  return sol;
}

EigenSolution lowest_eigenstates_all_sz(const LatticeSpec& spec, int n_particles, std::size_t k,
                                        const EigenOptions& opts) {
  const int sites = static_cast<int>(spec.sites);
  if (n_particles < 0 || n_particles > 2 * sites) throw InputError("particle number out of range");
  EigenSolution all;
  for (int up = std::max(0, n_particles - sites); up <= std::min(n_particles, sites); ++up) {
    LatticeSpec s = spec;
    s.n_up = up;
    s.n_down = n_particles - up;
    const auto h = build_hamiltonian(s);
    auto part = lowest_eigenstates(h, std::min(k, h.basis.dimension()), opts);
    for (auto& p : part.pairs) all.pairs.push_back(std::move(p));
  }
  std::stable_sort(all.pairs.begin(), all.pairs.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return a.energy < b.energy; });
  if (all.pairs.size() > k) all.pairs.erase(all.pairs.begin() + static_cast<std::ptrdiff_t>(k), all.pairs.end());
  return all;
}

}  // namespace meao
