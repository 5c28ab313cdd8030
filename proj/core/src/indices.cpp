#include "meao/indices.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <numeric>

#include "meao/error.hpp"

namespace meao {

double effective_bond_order(double n_bonding, double n_antibonding) {
  for (double n : {n_bonding, n_antibonding})
    if (!(n >= 0.0 && n <= 2.0)) throw DomainError("orbital occupations must lie in [0, 2]");
  return 0.5 * (n_bonding - n_antibonding);
}

double delocalization_index(const MixedState& state, const std::vector<std::size_t>& a,
                            const std::vector<std::size_t>& b) {
  if (a.empty() || b.empty()) throw ContractError("delocalization index needs two nonempty regions");
  const std::size_t n = state.n_orbitals();
  Config mask_a = 0, mask_b = 0;
  for (auto o : a) {
    if (o >= n) throw ContractError("orbital index out of range");
    mask_a |= (Config{1} << mode_index(o, Spin::Up)) | (Config{1} << mode_index(o, Spin::Down));
  }
  for (auto o : b) {
    if (o >= n) throw ContractError("orbital index out of range");
    const Config m = (Config{1} << mode_index(o, Spin::Up)) | (Config{1} << mode_index(o, Spin::Down));
    if (mask_a & m) throw ContractError("regions overlap");
    mask_b |= m;
  }
  // Both number operators are diagonal in the occupation basis.
  double na = 0.0, nb = 0.0, nab = 0.0;
  for (const auto& member : state.members()) {
    const double norm2 = member.state.norm() * member.state.norm();
    for (const auto& [c, amp] : member.state.amplitudes()) {
      const double p = member.weight * std::norm(amp) / norm2;
      const int ca = std::popcount(c & mask_a), cb = std::popcount(c & mask_b);
      na += p * ca;
      nb += p * cb;
      nab += p * ca * cb;
    }
  }
  return 2.0 * (na * nb - nab);
}

std::size_t DeltaTable::index_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw InputError("no delocalization entry for region '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

double DeltaTable::operator()(const std::string& a, const std::string& b) const {
  return values(static_cast<Eigen::Index>(index_of(a)), static_cast<Eigen::Index>(index_of(b)));
}

DeltaTable delta_table(const MixedState& state, const AtomicPartition& partition) {
  if (partition.n_orbitals() != state.n_orbitals()) throw ContractError("partition and state orbital counts differ");
  const auto& atoms = partition.atoms();
  DeltaTable t;
  const auto m = static_cast<Eigen::Index>(atoms.size());
  t.values = Eigen::MatrixXd::Zero(m, m);
  for (const auto& atom : atoms) t.labels.push_back(atom.label);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      t.values(i, j) = t.values(j, i) = delocalization_index(state, atoms[static_cast<std::size_t>(i)].orbitals,
                                                             atoms[static_cast<std::size_t>(j)].orbitals);
  return t;
}

void RingSpec::validate() const {
  if (atoms.size() < 3) throw ContractError("a ring needs at least three atoms");
  auto sorted = atoms;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ContractError("ring atom labels must be distinct");
}

double FluOptions::reference_for(const std::string& a, const std::string& b) const {
  if (auto it = overrides.find({a, b}); it != overrides.end()) return it->second;
  if (auto it = overrides.find({b, a}); it != overrides.end()) return it->second;
  return reference;
}

double flu(const DeltaTable& delta, const RingSpec& ring, const FluOptions& opts) {
  ring.validate();
  const std::size_t n = ring.atoms.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(delta.index_of(ring.atoms[i]));
    v[i] = delta.values.row(row).sum() - delta.values(row, row);
    if (!(v[i] > 0.0)) throw DomainError("atomic valence V of '" + ring.atoms[i] + "' is not positive");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    const double ref = opts.reference_for(ring.atoms[i], ring.atoms[prev]);
    if (!(ref > 0.0)) throw DomainError("reference delocalization must be positive");
    const double ratio = v[i] > v[prev] ? v[i] / v[prev] : v[prev] / v[i];
    double bracket = (delta(ring.atoms[i], ring.atoms[prev]) - ref) / ref;
    if (opts.squared) bracket *= bracket;
    sum += ratio * bracket;
  }
  return sum / static_cast<double>(n);
}

void AtomicOverlaps::validate() const {
  const Eigen::Index m = occupations.size();
  if (m == 0) throw InputError("overlaps need at least one natural orbital");
  for (Eigen::Index k = 0; k < m; ++k)
    if (!(occupations[k] >= 0.0 && occupations[k] <= 2.0))
      throw InputError("natural occupation " + std::to_string(k) + " outside [0, 2]");
  if (atoms.empty()) throw InputError("overlaps list no atoms");
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [label, s] : atoms) {
    if (s.rows() != m || s.cols() != m)
      throw InputError("overlap matrix of '" + label + "' does not match the number of occupations");
    if (!s.allFinite()) throw InputError("overlap matrix of '" + label + "' has non-finite entries");
    total += s;
  }
  const double err = (total - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (err > 1e-8) throw InputError("atomic overlaps do not sum to the identity (deviation " + std::to_string(err) + ")");
}

const Eigen::MatrixXd& AtomicOverlaps::overlap(const std::string& label) const {
  for (const auto& [l, s] : atoms)
    if (l == label) return s;
  throw InputError("no overlap matrix for atom '" + label + "'");
}

double i_ring(const AtomicOverlaps& overlaps, const RingSpec& ring) {
  ring.validate();
  const Eigen::MatrixXd d = overlaps.occupations.asDiagonal();
  Eigen::MatrixXd product = Eigen::MatrixXd::Identity(d.rows(), d.cols());
  for (const auto& atom : ring.atoms) product = product * d * overlaps.overlap(atom);
  return product.trace();
}

double mci(const AtomicOverlaps& overlaps, const RingSpec& ring, unsigned threads) {
  ring.validate();
  const std::size_t n = ring.atoms.size();
  if (n > kMaxMciAtoms) throw ContractError("MCI is limited to rings of " + std::to_string(kMaxMciAtoms) + " atoms");
  for (const auto& atom : ring.atoms) (void)overlaps.overlap(atom);

  // One task per leading atom; partial sums are added in a fixed order.
  auto partial = [&](std::size_t lead) {
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < n; ++i)
      if (i != lead) rest.push_back(ring.atoms[i]);
    std::sort(rest.begin(), rest.end());
    RingSpec perm{std::vector<std::string>(n)};
    perm.atoms[0] = ring.atoms[lead];
    double s = 0.0;
    do {
      std::copy(rest.begin(), rest.end(), perm.atoms.begin() + 1);
      s += i_ring(overlaps, perm);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return s;
  };
  std::vector<double> sums(n, 0.0);
  if (threads <= 1) {
    for (std::size_t lead = 0; lead < n; ++lead) sums[lead] = partial(lead);
  } else {
    std::vector<std::future<double>> tasks;
    for (std::size_t lead = 0; lead < n; ++lead) tasks.push_back(std::async(std::launch::async, partial, lead));
    for (std::size_t lead = 0; lead < n; ++lead) sums[lead] = tasks[lead].get();
  }
  return std::accumulate(sums.begin(), sums.end(), 0.0) / (2.0 * static_cast<double>(n));
}

double homa(const std::vector<double>& bond_lengths, double r_opt, double alpha) {
  if (bond_lengths.empty()) throw ContractError("HOMA needs at least one bond length");
  if (!(alpha > 0.0)) throw DomainError("HOMA alpha must be positive");
  double sum = 0.0;
  for (double r : bond_lengths) sum += (r_opt - r) * (r_opt - r);
  return 1.0 - alpha / static_cast<double>(bond_lengths.size()) * sum;
}

}  // namespace meao
