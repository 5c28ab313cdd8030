#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace meao {

/// Assignment of every spatial orbital to exactly one atom.
class AtomicPartition {
 public:
  struct Atom {
    std::string label;
    std::vector<std::size_t> orbitals;
  };

  AtomicPartition(std::size_t n_orbitals, std::vector<Atom> atoms);

  /// One atom per orbital, labelled "A0", "A1", ...
  static AtomicPartition single_orbital_atoms(std::size_t n_orbitals);

  std::size_t n_orbitals() const noexcept { return atom_of_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t atom_index(std::size_t orbital) const { return atom_of_.at(orbital); }
  const std::string& label_of(std::size_t orbital) const { return atoms_[atom_of_.at(orbital)].label; }
  bool same_atom(std::size_t i, std::size_t j) const { return atom_of_.at(i) == atom_of_.at(j); }

 private:
  std::vector<Atom> atoms_;
  std::vector<std::size_t> atom_of_;
};

using OrbitalPair = std::pair<std::size_t, std::size_t>;

/// All (k, l), k < l, with both orbitals on the same atom.
std::vector<OrbitalPair> intra_atom_pairs(const AtomicPartition& partition);
/// All (i, j), i < j, on different atoms.
std::vector<OrbitalPair> inter_atom_pairs(const AtomicPartition& partition);
/// Every (k, l), k < l.
std::vector<OrbitalPair> all_orbital_pairs(std::size_t n_orbitals);

}  // namespace meao
