#include "meao/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "meao/error.hpp"

namespace meao {

double orbital_max_entropy() { return std::log(4.0); }
double max_mutual_information() { return 2.0 * std::log(4.0); }

double entropy_of_spectrum(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double lam : eigenvalues) {
    if (lam < -1e-10) throw InputError("density operator has eigenvalue " + std::to_string(lam) + " < -1e-10");
    if (lam > 0.0) s -= lam * std::log(lam);
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
  const Complex tr = rho.matrix.trace();
  if (std::abs(tr - 1.0) > 1e-8) throw InputError("density operator trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix, Eigen::EigenvaluesOnly);
  std::vector<double> eig(es.eigenvalues().begin(), es.eigenvalues().end());
  return entropy_of_spectrum(eig);
}

double subset_entropy(const MixedState& state, std::span<const std::size_t> subset) {
  const std::size_t n = state.n_orbitals();
  if (state.is_pure() && 2 * subset.size() > n && subset.size() < n) {
    // The complement has the same spectrum and a smaller Fock space.
    std::vector<bool> in(n, false);
    for (auto o : subset) {
      if (o >= n) throw ContractError("orbital index out of range");
      in[o] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t o = 0; o < n; ++o)
      if (!in[o]) rest.push_back(o);
    if (rest.size() + subset.size() == n) {
      const auto eig = reduced_spectrum(state, rest);
      return entropy_of_spectrum(eig);
    }
  }
  const auto eig = reduced_spectrum(state, subset);
  return entropy_of_spectrum(eig);
}

EntanglementReport mutual_information(const MixedState& state, std::size_t i, std::size_t j) {
  if (i == j) throw ContractError("mutual_information needs two distinct orbitals");
  const std::size_t si[] = {i}, sj[] = {j}, sij[] = {i, j};
  const double value = subset_entropy(state, si) + subset_entropy(state, sj) - subset_entropy(state, sij);
  const double imax = max_mutual_information();
  return {{{i}, {j}}, value, value / imax, imax};
}

namespace {

std::vector<std::size_t> complement_of(std::span<const std::size_t> subset, std::size_t n) {
  std::vector<bool> in(n, false);
  for (auto o : subset) {
    if (o >= n) throw ContractError("index " + std::to_string(o) + " out of range");
    if (in[o]) throw ContractError("duplicate index " + std::to_string(o));
    in[o] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t o = 0; o < n; ++o)
    if (!in[o]) rest.push_back(o);
  return rest;
}

}  // namespace

EntanglementReport pure_bipartite_entanglement(const WaveFunction& wf, std::span<const std::size_t> subset) {
  const std::size_t n = wf.n_orbitals();
  if (subset.empty() || subset.size() >= n) throw ContractError("bipartition subset must be proper and nonempty");
  auto rest = complement_of(subset, n);
  const double value = subset_entropy(MixedState(wf), subset);
  const double norm = static_cast<double>(std::min(subset.size(), rest.size())) * orbital_max_entropy();
  return {{{subset.begin(), subset.end()}, std::move(rest)}, value, value / norm, norm};
}

Eigen::MatrixXcd reduced_qudit_density(const QuditState& psi, std::span<const std::size_t> parties) {
  const std::size_t k = psi.parties();
  auto rest = complement_of(parties, k);
  std::size_t dim_a = 1, dim_b = 1;
  for (auto p : parties) dim_a *= psi.local_dims[p];
  for (auto p : rest) dim_b *= psi.local_dims[p];
  // Amplitudes reshaped to (A, B) with the requested party order.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_b));
  std::vector<std::size_t> digits(k, 0);
  const auto total = static_cast<std::size_t>(psi.amplitudes.size());
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t x = flat;
    for (std::size_t p = k; p-- > 0;) {
      digits[p] = x % psi.local_dims[p];
      x /= psi.local_dims[p];
    }
    std::size_t a = 0, b = 0;
    for (auto p : parties) a = a * psi.local_dims[p] + digits[p];
    for (auto p : rest) b = b * psi.local_dims[p] + digits[p];
    m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = psi.amplitudes[static_cast<Eigen::Index>(flat)];
  }
  return m * m.adjoint();
}

namespace {

double qudit_entropy(const QuditState& psi, std::span<const std::size_t> parties) {
  const Eigen::MatrixXcd rho = reduced_qudit_density(psi, parties);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> eig(es.eigenvalues().begin(), es.eigenvalues().end());
  return entropy_of_spectrum(eig);
}

std::size_t product_dim(const QuditState& psi, std::span<const std::size_t> parties) {
  std::size_t d = 1;
  for (auto p : parties) d *= psi.local_dims[p];
  return d;
}

}  // namespace

EntanglementReport pure_bipartite_entanglement(const QuditState& psi, std::span<const std::size_t> subset) {
  const std::size_t k = psi.parties();
  if (subset.empty() || subset.size() >= k) throw ContractError("bipartition subset must be proper and nonempty");
  auto rest = complement_of(subset, k);
  const std::size_t da = product_dim(psi, subset), db = product_dim(psi, rest);
  const double value = da <= db ? qudit_entropy(psi, subset) : qudit_entropy(psi, rest);
  const double norm = std::log(static_cast<double>(std::min(da, db)));
  return {{{subset.begin(), subset.end()}, std::move(rest)}, value, value / norm, norm};
}

namespace {

void check_parties(const std::vector<std::vector<std::size_t>>& parties, std::size_t n, bool must_cover) {
  if (parties.size() < 2) throw ContractError("GME needs at least two parties");
  if (parties.size() > kMaxGmeParties)
    throw ContractError("GME is limited to " + std::to_string(kMaxGmeParties) + " parties");
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (const auto& party : parties) {
    if (party.empty()) throw ContractError("GME parties must be nonempty");
    for (auto o : party) {
      if (o >= n) throw ContractError("GME party index " + std::to_string(o) + " out of range");
      if (seen[o]) throw ContractError("GME parties overlap at index " + std::to_string(o));
      seen[o] = true;
      ++covered;
    }
  }
  if (must_cover && covered != n) throw ContractError("GME parties must cover every mode of the state");
}

/// Enumerates the 2^{K-1} - 1 bipartitions with party 0 on the first side and
/// returns the minimizing one.
template <class SideCost>
EntanglementReport minimize_bipartitions(const std::vector<std::vector<std::size_t>>& parties, SideCost&& cost) {
  const std::size_t k = parties.size();
  EntanglementReport best;
  bool have = false;
  std::vector<std::size_t> best_other;
  for (std::size_t mask = 1; mask < (std::size_t{1} << (k - 1)); ++mask) {
    std::vector<std::size_t> first = parties[0], other;
    for (std::size_t p = 1; p < k; ++p) {
      auto& side = (mask >> (p - 1)) & 1U ? other : first;
      side.insert(side.end(), parties[p].begin(), parties[p].end());
    }
    std::sort(first.begin(), first.end());
    std::sort(other.begin(), other.end());
    const double value = cost(first, other);
    const bool better = !have || value < best.raw - 1e-12 || (std::abs(value - best.raw) <= 1e-12 && other < best_other);
    if (better) {
      best.raw = have ? std::min(best.raw, value) : value;
      best.subsets = {first, other};
      best_other = other;
      have = true;
    }
  }
  return best;
}

}  // namespace

EntanglementReport min_bipartition_entropy(const MixedState& state,
                                           const std::vector<std::vector<std::size_t>>& parties) {
  check_parties(parties, state.n_orbitals(), false);
  auto report = minimize_bipartitions(parties, [&](const std::vector<std::size_t>& a,
                                                   const std::vector<std::size_t>& b) {
    return subset_entropy(state, a.size() <= b.size() ? a : b);
  });
  std::size_t smallest = parties.front().size();
  for (const auto& p : parties) smallest = std::min(smallest, p.size());
  report.normalization = static_cast<double>(smallest) * orbital_max_entropy();
  report.normalized = report.raw / report.normalization;
  return report;
}

EntanglementReport gme(const WaveFunction& wf, const std::vector<std::vector<std::size_t>>& parties) {
  check_parties(parties, wf.n_orbitals(), true);
  return min_bipartition_entropy(MixedState(wf), parties);
}

EntanglementReport gme(const QuditState& psi, const std::vector<std::vector<std::size_t>>& parties) {
  check_parties(parties, psi.parties(), true);
  auto report = minimize_bipartitions(parties, [&](const std::vector<std::size_t>& a,
                                                   const std::vector<std::size_t>& b) {
    return product_dim(psi, a) <= product_dim(psi, b) ? qudit_entropy(psi, a) : qudit_entropy(psi, b);
  });
  std::size_t smallest = product_dim(psi, parties.front());
  for (const auto& p : parties) smallest = std::min(smallest, product_dim(psi, p));
  report.normalization = std::log(static_cast<double>(smallest));
  report.normalized = report.raw / report.normalization;
  return report;
}

}  // namespace meao
