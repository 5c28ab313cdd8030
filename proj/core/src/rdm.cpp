#include "meao/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "meao/error.hpp"

namespace meao {

TwoRDM::TwoRDM(std::size_t n_orbitals) : n_(n_orbitals), data_(n_orbitals * n_orbitals * n_orbitals * n_orbitals) {}

Complex TwoRDM::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t += (*this)(i, j, i, j);
  return t;
}

double TwoRDM::hermiticity_error() const {
  double err = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t l = 0; l < n_; ++l)
          err = std::max(err, std::abs((*this)(i, j, k, l) - std::conj((*this)(k, l, i, j))));
  return err;
}

bool TwoRDM::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

// ---------------------------------------------------------------------------

MixedState::MixedState(std::vector<Member> members) : members_(std::move(members)) {
  if (members_.empty()) throw ContractError("MixedState needs at least one member");
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.weight >= 0.0)) throw InputError("MixedState weights must be non-negative");
    if (m.state.n_orbitals() != members_.front().state.n_orbitals())
      throw ContractError("MixedState members must share the orbital count");
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("MixedState weights must sum to 1");
}

MixedState::MixedState(WaveFunction pure) : members_{{1.0, std::move(pure)}} {}

// ---------------------------------------------------------------------------

OneRDM one_rdm(const WaveFunction& wf) {
  const auto n = static_cast<Eigen::Index>(wf.n_orbitals());
  OneRDM g{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n)};
  for (const auto& [c, a] : wf.amplitudes()) {
    for (int s = 0; s < 2; ++s) {
      auto& mat = s == 0 ? g.up : g.down;
      for (Eigen::Index k = 0; k < n; ++k) {
        auto x = annihilate(c, mode_index(static_cast<std::size_t>(k), static_cast<Spin>(s)));
        if (!x) continue;
        for (Eigen::Index i = 0; i < n; ++i) {
          auto y = create(x->config, mode_index(static_cast<std::size_t>(i), static_cast<Spin>(s)));
          if (!y) continue;
          const Complex bra = wf.amplitude(y->config);
          if (bra == Complex{}) continue;
          mat(i, k) += std::conj(bra) * a * static_cast<double>(x->sign * y->sign);
        }
      }
    }
  }
  return g;
}

OneRDM one_rdm(const MixedState& state) {
  const auto n = static_cast<Eigen::Index>(state.n_orbitals());
  OneRDM g{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n)};
  for (const auto& m : state.members()) {
    const OneRDM part = one_rdm(m.state);
    g.up += m.weight * part.up;
    g.down += m.weight * part.down;
  }
  return g;
}

TwoRDM two_rdm_mixed(const WaveFunction& wf) {
  const std::size_t n = wf.n_orbitals();
  TwoRDM gamma(n);
  for (const auto& [c, a] : wf.amplitudes()) {
    for (std::size_t k = 0; k < n; ++k) {
      auto x1 = annihilate(c, mode_index(k, Spin::Up));
      if (!x1) continue;
      for (std::size_t l = 0; l < n; ++l) {
        auto x2 = annihilate(x1->config, mode_index(l, Spin::Down));
        if (!x2) continue;
        for (std::size_t j = 0; j < n; ++j) {
          auto y1 = create(x2->config, mode_index(j, Spin::Down));
          if (!y1) continue;
          for (std::size_t i = 0; i < n; ++i) {
            auto y2 = create(y1->config, mode_index(i, Spin::Up));
            if (!y2) continue;
            const Complex bra = wf.amplitude(y2->config);
            if (bra == Complex{}) continue;
            const int sign = x1->sign * x2->sign * y1->sign * y2->sign;
            gamma(i, j, k, l) += std::conj(bra) * a * static_cast<double>(sign);
          }
        }
      }
    }
  }
  return gamma;
}

TwoRDM two_rdm_mixed(const MixedState& state) {
  TwoRDM gamma(state.n_orbitals());
  for (const auto& m : state.members()) {
    const TwoRDM part = two_rdm_mixed(m.state);
    auto dst = gamma.data();
    auto src = part.data();
    for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += m.weight * src[q];
  }
  return gamma;
}

// ---------------------------------------------------------------------------

namespace {

void check_subset(std::span<const std::size_t> subset, std::size_t n) {
  if (subset.empty()) throw ContractError("orbital subset must be nonempty");
  std::vector<bool> seen(n, false);
  for (auto o : subset) {
    if (o >= n) throw ContractError("orbital index " + std::to_string(o) + " out of range");
    if (seen[o]) throw ContractError("duplicate orbital index " + std::to_string(o) + " in subset");
    seen[o] = true;
  }
}

/// Splits configurations into (local subset index, complement config, sign).
class SubsetSplitter {
 public:
  SubsetSplitter(std::size_t n, std::span<const std::size_t> subset) : m_(subset.size()), rank_(2 * n) {
    std::vector<bool> in_subset(n, false);
    for (auto o : subset) in_subset[o] = true;
    std::size_t r = 0;
    for (auto o : subset) {
      rank_[2 * o] = r++;
      rank_[2 * o + 1] = r++;
    }
    for (std::size_t o = 0; o < n; ++o) {
      if (in_subset[o]) continue;
      rank_[2 * o] = r++;
      rank_[2 * o + 1] = r++;
      complement_mask_ |= Config{3} << (2 * o);
    }
    subset_.assign(subset.begin(), subset.end());
  }

  struct Split {
    std::size_t local;
    Config rest;
    int sign;
  };

  Split operator()(Config c) const {
    std::size_t local = 0;
    for (auto o : subset_) local = (local << 2) | ((c >> (2 * o)) & 3U);
    // Parity of the permutation taking occupied modes from global order to
    // subset-leading order.
    int inversions = 0;
    std::size_t seen_ranks[2 * kMaxOrbitals];
    std::size_t count = 0;
    for (std::size_t p = 0; p < rank_.size(); ++p) {
      if (!occupied(c, p)) continue;
      const std::size_t r = rank_[p];
      for (std::size_t q = 0; q < count; ++q)
        if (seen_ranks[q] > r) ++inversions;
      seen_ranks[count++] = r;
    }
    return {local, c & complement_mask_, (inversions & 1) ? -1 : 1};
  }

  std::size_t local_dim() const noexcept { return std::size_t{1} << (2 * m_); }

 private:
  std::size_t m_;
  std::vector<std::size_t> rank_;
  std::vector<std::size_t> subset_;
  Config complement_mask_ = 0;
};

using Grouped = std::map<Config, std::vector<std::pair<std::size_t, Complex>>>;

Grouped group_by_complement(const WaveFunction& wf, const SubsetSplitter& split) {
  Grouped groups;
  for (const auto& [c, a] : wf.amplitudes()) {
    const auto s = split(c);
    groups[s.rest].emplace_back(s.local, a * static_cast<double>(s.sign));
  }
  return groups;
}

void accumulate_dense(const WaveFunction& wf, const SubsetSplitter& split, double weight, Eigen::MatrixXcd& rho) {
  for (const auto& [rest, entries] : group_by_complement(wf, split))
    for (const auto& [a, x] : entries)
      for (const auto& [b, y] : entries) rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += weight * x * std::conj(y);
}

int local_up(std::size_t local, std::size_t m) {
  int s = 0;
  for (std::size_t q = 0; q < m; ++q) s += static_cast<int>((local >> (2 * q)) & 1U);
  return s;
}

int local_down(std::size_t local, std::size_t m) {
  int s = 0;
  for (std::size_t q = 0; q < m; ++q) s += static_cast<int>((local >> (2 * q + 1)) & 1U);
  return s;
}

}  // namespace

DensityOperator reduced_density_operator(const WaveFunction& wf, std::span<const std::size_t> subset) {
  return reduced_density_operator(MixedState(wf), subset);
}

DensityOperator reduced_density_operator(const MixedState& state, std::span<const std::size_t> subset) {
  check_subset(subset, state.n_orbitals());
  const SubsetSplitter split(state.n_orbitals(), subset);
  const auto dim = static_cast<Eigen::Index>(split.local_dim());
  DensityOperator out{{subset.begin(), subset.end()}, Eigen::MatrixXcd::Zero(dim, dim)};
  for (const auto& m : state.members()) accumulate_dense(m.state, split, m.weight, out.matrix);
  return out;
}

namespace {

/// Reduced operator as a map from local (n↑, n↓) block to dense block.
struct BlockOperator {
  std::map<std::pair<int, int>, std::vector<std::size_t>> basis;  // block -> local indices
  std::map<std::pair<int, int>, Eigen::MatrixXcd> blocks;
};

bool sector_conserving(const MixedState& state) {
  return std::all_of(state.members().begin(), state.members().end(),
                     [](const auto& m) { return m.state.sector().has_value(); });
}

BlockOperator reduced_blocks(const MixedState& state, std::span<const std::size_t> subset) {
  check_subset(subset, state.n_orbitals());
  const SubsetSplitter split(state.n_orbitals(), subset);
  const std::size_t m = subset.size();
  BlockOperator op;
  std::map<std::size_t, std::pair<std::pair<int, int>, std::size_t>> where;
  auto locate = [&](std::size_t local) {
    auto it = where.find(local);
    if (it != where.end()) return it->second;
    const std::pair<int, int> key{local_up(local, m), local_down(local, m)};
    auto& idx = op.basis[key];
    idx.push_back(local);
    auto pos = std::make_pair(key, idx.size() - 1);
    where.emplace(local, pos);
    return pos;
  };
  // First pass fixes block layouts, second fills them.
  std::vector<Grouped> grouped;
  grouped.reserve(state.members().size());
  for (const auto& mem : state.members()) {
    grouped.push_back(group_by_complement(mem.state, split));
    for (const auto& [rest, entries] : grouped.back())
      for (const auto& e : entries) locate(e.first);
  }
  for (const auto& [key, idx] : op.basis) {
    const auto d = static_cast<Eigen::Index>(idx.size());
    op.blocks.emplace(key, Eigen::MatrixXcd::Zero(d, d));
  }
  for (std::size_t q = 0; q < grouped.size(); ++q) {
    const double w = state.members()[q].weight;
    for (const auto& [rest, entries] : grouped[q]) {
      for (const auto& [a, x] : entries) {
        const auto pa = where.at(a);
        auto& blk = op.blocks.at(pa.first);
        for (const auto& [b, y] : entries) {
          const auto pb = where.at(b);
          blk(static_cast<Eigen::Index>(pa.second), static_cast<Eigen::Index>(pb.second)) += w * x * std::conj(y);
        }
      }
    }
  }
  return op;
}

}  // namespace

std::vector<double> reduced_spectrum(const MixedState& state, std::span<const std::size_t> subset) {
  std::vector<double> eig;
  if (sector_conserving(state)) {
    const auto op = reduced_blocks(state, subset);
    for (const auto& [key, blk] : op.blocks) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(blk, Eigen::EigenvaluesOnly);
      for (Eigen::Index q = 0; q < es.eigenvalues().size(); ++q) eig.push_back(es.eigenvalues()[q]);
    }
  } else {
    const auto rho = reduced_density_operator(state, subset);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix, Eigen::EigenvaluesOnly);
    for (Eigen::Index q = 0; q < es.eigenvalues().size(); ++q) eig.push_back(es.eigenvalues()[q]);
  }
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

double reduced_purity(const MixedState& state, std::span<const std::size_t> subset) {
  const auto eig = reduced_spectrum(state, subset);
  return std::accumulate(eig.begin(), eig.end(), 0.0, [](double acc, double x) { return acc + x * x; });
}

// ---------------------------------------------------------------------------

MixedState thermal_state(std::span<const Eigenpair> eigenpairs, double beta) {
  if (!(beta > 0.0)) throw DomainError("thermal_state: beta must be positive");
  if (eigenpairs.empty()) throw ContractError("thermal_state: no eigenpairs supplied");
  double emin = eigenpairs.front().energy;
  for (const auto& e : eigenpairs) emin = std::min(emin, e.energy);
  std::vector<double> w;
  w.reserve(eigenpairs.size());
  double z = 0.0;
  for (const auto& e : eigenpairs) {
    w.push_back(std::exp(-beta * (e.energy - emin)));
    z += w.back();
  }
  std::vector<MixedState::Member> members;
  members.reserve(eigenpairs.size());
  for (std::size_t q = 0; q < eigenpairs.size(); ++q) members.push_back({w[q] / z, eigenpairs[q].state});
  return MixedState(std::move(members));
}

}  // namespace meao
