#include "meao/bondgraph.hpp"

#include <algorithm>
#include <numeric>

#include "meao/entanglement.hpp"
#include "meao/error.hpp"

namespace meao {

namespace {

constexpr double kPurityTolerance = 1e-8;

bool pure_reduction(const MixedState& state, const std::vector<std::size_t>& subset) {
  if (!state.is_pure()) return false;
  const std::size_t n = state.n_orbitals();
  if (subset.size() == n) return true;
  std::vector<std::size_t> smaller = subset;
  if (2 * subset.size() > n) {
    std::vector<bool> in(n, false);
    for (auto o : subset) in[o] = true;
    smaller.clear();
    for (std::size_t o = 0; o < n; ++o)
      if (!in[o]) smaller.push_back(o);
  }
  return reduced_purity(state, smaller) >= 1.0 - kPurityTolerance;
}

}  // namespace

CorrelationGraph build_correlation_graph(const MixedState& state, const AtomicPartition& partition,
                                         const GraphOptions& opts) {
  if (!(opts.eta > 0.0 && opts.eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
  const std::size_t n = state.n_orbitals();
  if (partition.n_orbitals() != n) throw ContractError("partition and state orbital counts differ");

  CorrelationGraph g;
  g.n_orbitals = n;
  g.eta = opts.eta;
  g.i_max = max_mutual_information();
  g.intra_atom_edges = opts.include_intra_atom;
  for (std::size_t o = 0; o < n; ++o) g.atom_labels.push_back(partition.label_of(o));

  std::vector<double> single(n);
  for (std::size_t o = 0; o < n; ++o) {
    const std::size_t s[] = {o};
    single[o] = subset_entropy(state, s);
  }
  const double threshold = opts.eta * g.i_max;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!opts.include_intra_atom && partition.same_atom(i, j)) continue;
      const std::size_t s[] = {i, j};
      const double mi = single[i] + single[j] - subset_entropy(state, s);
      if (mi >= threshold) g.edges.push_back({i, j, mi});
    }
  return g;
}

std::vector<std::vector<std::size_t>> clusters(const CorrelationGraph& graph) {
  const std::size_t n = graph.n_orbitals;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : graph.edges) {
    const auto a = find(e.i), b = find(e.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t o = 0; o < n; ++o) groups[find(o)].push_back(o);
  std::erase_if(groups, [](const auto& v) { return v.empty(); });
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return groups;
}

std::vector<std::size_t> nonbonding_orbitals(const std::vector<std::vector<std::size_t>>& components) {
  std::vector<std::size_t> out;
  for (const auto& c : components)
    if (c.size() == 1) out.push_back(c.front());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BondRecord> bond_table(const MixedState& state, const CorrelationGraph& graph) {
  if (state.n_orbitals() != graph.n_orbitals) throw ContractError("state and graph orbital counts differ");
  std::vector<BondRecord> records;
  for (const auto& cluster : clusters(graph)) {
    if (cluster.size() < 2) continue;
    BondRecord rec;
    rec.orbitals = cluster;
    for (auto o : cluster)
      if (std::find(rec.atoms.begin(), rec.atoms.end(), graph.atom_labels[o]) == rec.atoms.end())
        rec.atoms.push_back(graph.atom_labels[o]);

    if (cluster.size() == 2) {
      rec.kind = BondKind::TwoCenter;
      const auto mi = mutual_information(state, cluster[0], cluster[1]);
      rec.i_norm = mi.normalized;
      if (pure_reduction(state, cluster)) {
        const std::size_t s[] = {cluster[0]};
        rec.e_norm = subset_entropy(state, s) / orbital_max_entropy();
      }
    } else {
      rec.kind = BondKind::Multicenter;
      if (cluster.size() <= kMaxGmeParties && pure_reduction(state, cluster)) {
        std::vector<std::vector<std::size_t>> parties;
        for (auto o : cluster) parties.push_back({o});
        rec.gme_norm = min_bipartition_entropy(state, parties).normalized;
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::map<std::pair<std::string, std::string>, int> bond_multiplicities(const std::vector<BondRecord>& records) {
  std::map<std::pair<std::string, std::string>, int> out;
  for (const auto& r : records) {
    if (r.kind != BondKind::TwoCenter || r.atoms.size() != 2) continue;
    auto key = std::minmax(r.atoms[0], r.atoms[1]);
    ++out[{key.first, key.second}];
  }
  return out;
}

std::string to_string(BondKind kind) { return kind == BondKind::TwoCenter ? "two-center" : "multicenter"; }

}  // namespace meao
