#include "meao/partition.hpp"

#include <limits>

#include "meao/error.hpp"

namespace meao {

AtomicPartition::AtomicPartition(std::size_t n_orbitals, std::vector<Atom> atoms)
    : atoms_(std::move(atoms)), atom_of_(n_orbitals, std::numeric_limits<std::size_t>::max()) {
  if (n_orbitals == 0) throw ContractError("partition needs at least one orbital");
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (atoms_[a].label.empty()) throw ContractError("atom labels must be nonempty");
    if (atoms_[a].orbitals.empty()) throw ContractError("atom '" + atoms_[a].label + "' has no orbitals");
    for (std::size_t b = 0; b < a; ++b)
      if (atoms_[b].label == atoms_[a].label) throw ContractError("duplicate atom label '" + atoms_[a].label + "'");
    for (auto o : atoms_[a].orbitals) {
      if (o >= n_orbitals) throw ContractError("orbital " + std::to_string(o) + " out of range");
      if (atom_of_[o] != std::numeric_limits<std::size_t>::max())
        throw ContractError("orbital " + std::to_string(o) + " assigned to more than one atom");
      atom_of_[o] = a;
    }
  }
  for (std::size_t o = 0; o < n_orbitals; ++o)
    if (atom_of_[o] == std::numeric_limits<std::size_t>::max())
      throw ContractError("orbital " + std::to_string(o) + " is not assigned to any atom");
}

AtomicPartition AtomicPartition::single_orbital_atoms(std::size_t n_orbitals) {
  std::vector<Atom> atoms;
  atoms.reserve(n_orbitals);
  for (std::size_t o = 0; o < n_orbitals; ++o) atoms.push_back({"A" + std::to_string(o), {o}});
  return AtomicPartition(n_orbitals, std::move(atoms));
}

std::vector<OrbitalPair> intra_atom_pairs(const AtomicPartition& partition) {
  std::vector<OrbitalPair> out;
  for (std::size_t k = 0; k < partition.n_orbitals(); ++k)
    for (std::size_t l = k + 1; l < partition.n_orbitals(); ++l)
      if (partition.same_atom(k, l)) out.emplace_back(k, l);
  return out;
}

std::vector<OrbitalPair> inter_atom_pairs(const AtomicPartition& partition) {
  std::vector<OrbitalPair> out;
  for (std::size_t i = 0; i < partition.n_orbitals(); ++i)
    for (std::size_t j = i + 1; j < partition.n_orbitals(); ++j)
      if (!partition.same_atom(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<OrbitalPair> all_orbital_pairs(std::size_t n_orbitals) {
  std::vector<OrbitalPair> out;
  for (std::size_t k = 0; k < n_orbitals; ++k)
    for (std::size_t l = k + 1; l < n_orbitals; ++l) out.emplace_back(k, l);
  return out;
}

}  // namespace meao
