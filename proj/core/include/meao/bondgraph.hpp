#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meao/partition.hpp"
#include "meao/rdm.hpp"

namespace meao {

struct CorrelationEdge {
  std::size_t i;
  std::size_t j;
  double mutual_information;  ///< nats
};

/// Thresholded mutual-information graph over orbitals. Edges join orbitals of
/// different atoms (unless intra-atom edges were requested) whose I_ij is at
/// least eta * I_max, with I_max = 2 log 4.
struct CorrelationGraph {
  std::size_t n_orbitals = 0;
  std::vector<std::string> atom_labels;  ///< per orbital
  std::vector<CorrelationEdge> edges;
  double eta = 0.1;
  double i_max = 0.0;
  bool intra_atom_edges = false;
};

struct GraphOptions {
  double eta = 0.1;
  bool include_intra_atom = false;
};

CorrelationGraph build_correlation_graph(const MixedState& state, const AtomicPartition& partition,
                                         const GraphOptions& opts = {});

/// Connected components, sorted by size and then lexicographically.
/// Singletons are non-bonding orbitals.
std::vector<std::vector<std::size_t>> clusters(const CorrelationGraph& graph);
std::vector<std::size_t> nonbonding_orbitals(const std::vector<std::vector<std::size_t>>& components);

enum class BondKind { TwoCenter, Multicenter };

struct BondRecord {
  BondKind kind;
  std::vector<std::string> atoms;  ///< distinct labels, in order of first orbital
  std::vector<std::size_t> orbitals;
  std::optional<double> i_norm;    ///< I / I_max (two-center)
  std::optional<double> e_norm;    ///< E / log 4 when the pair reduction is pure
  std::optional<double> gme_norm;  ///< GME / log 4 (multicenter, pure cluster)
};

/// Bond records for every cluster with at least two orbitals.
std::vector<BondRecord> bond_table(const MixedState& state, const CorrelationGraph& graph);

/// Number of two-center records joining each unordered atom pair.
std::map<std::pair<std::string, std::string>, int> bond_multiplicities(const std::vector<BondRecord>& records);

std::string to_string(BondKind kind);

}  // namespace meao
