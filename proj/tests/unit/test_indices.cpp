#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "meao/error.hpp"
#include "meao/indices.hpp"
#include "meao/models.hpp"

using namespace meao;

namespace {

DeltaTable ring_table(const std::vector<double>& bonds) {
  const std::size_t n = bonds.size();
  DeltaTable t;
  for (std::size_t i = 0; i < n; ++i) t.labels.push_back("C" + std::to_string(i + 1));
  t.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>((i + 1) % n);
    t.values(a, b) = t.values(b, a) = bonds[i];
  }
  return t;
}

RingSpec ring_of(std::size_t n) {
  RingSpec r;
  for (std::size_t i = 0; i < n; ++i) r.atoms.push_back("C" + std::to_string(i + 1));
  return r;
}

// Explicit N-fold index sum of the ring multicenter index.
double i_ring_brute(const AtomicOverlaps& ov, const RingSpec& ring) {
  const auto m = static_cast<std::size_t>(ov.occupations.size());
  const std::size_t n = ring.atoms.size();
  std::vector<std::size_t> idx(n, 0);
  double total = 0.0;
  while (true) {
    double term = 1.0;
    for (std::size_t a = 0; a < n; ++a) {
      const auto i = static_cast<Eigen::Index>(idx[a]), j = static_cast<Eigen::Index>(idx[(a + 1) % n]);
      term *= ov.occupations[i] * ov.overlap(ring.atoms[a])(i, j);
    }
    total += term;
    std::size_t q = 0;
    while (q < n && ++idx[q] == m) idx[q++] = 0;
    if (q == n) break;
  }
  return total;
}

AtomicOverlaps random_overlaps(std::size_t atoms, std::size_t orbitals, std::mt19937_64& rng) {
  // Projectors of a random orthogonal matrix split into atomic blocks sum to 1.
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> occ(0.0, 2.0);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(orbitals), static_cast<Eigen::Index>(orbitals));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(x).householderQ();
  AtomicOverlaps ov;
  ov.occupations.resize(static_cast<Eigen::Index>(orbitals));
  for (Eigen::Index k = 0; k < ov.occupations.size(); ++k) ov.occupations[k] = occ(rng);
  for (std::size_t a = 0; a < atoms; ++a) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    for (std::size_t c = a; c < orbitals; c += atoms)
      s += q.col(static_cast<Eigen::Index>(c)) * q.col(static_cast<Eigen::Index>(c)).transpose();
    ov.atoms.emplace_back("C" + std::to_string(a + 1), s);
  }
  return ov;
}

}  // namespace

TEST_SUITE("indices") {

TEST_CASE("effective bond order") {
  CHECK(effective_bond_order(2, 0) == 1.0);
  CHECK(effective_bond_order(1, 1) == 0.0);
  CHECK(effective_bond_order(1.8, 0.2) == doctest::Approx(0.8));
  CHECK_THROWS_AS(effective_bond_order(2.1, 0), DomainError);
  CHECK_THROWS_AS(effective_bond_order(1, -0.1), DomainError);
}

TEST_CASE("delocalization index") {
  CHECK(delocalization_index(ideal_bond_state(), {0}, {1}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(delocalization_index(ionic_state(1.0), {0}, {1}) == doctest::Approx(0.0));
  CHECK(delocalization_index(ideal_bond_state(), {1}, {0}) == delocalization_index(ideal_bond_state(), {0}, {1}));
  CHECK_THROWS_AS(delocalization_index(ideal_bond_state(), {0}, {0, 1}), ContractError);
}

TEST_CASE("dimer delocalization falls as U grows") {
  double previous = 2.0;
  for (double u : {0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const MixedState gs = lowest_eigenstates(build_hamiltonian(chain_spec(2, 1.0, u, 1, 1)), 1).pairs[0].state;
    const double d = delocalization_index(gs, {0}, {1});
    CHECK(d < previous);
    CHECK(d >= 0.0);
    previous = d;
  }
}

TEST_CASE("delta table of a state is symmetric") {
  const MixedState gs = lowest_eigenstates(build_hamiltonian(ring_spec(4, 1.0, 2.0, 2, 2)), 1).pairs[0].state;
  const auto t = delta_table(gs, AtomicPartition::single_orbital_atoms(4));
  CHECK((t.values - t.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(t("A0", "A1") == doctest::Approx(t("A2", "A3")).epsilon(1e-12));
}

TEST_CASE("FLU") {
  FluOptions opts;
  opts.reference = 1.389;
  CHECK(flu(ring_table(std::vector<double>(6, 1.389)), ring_of(6), opts) == doctest::Approx(0.0));

  const double x = 0.1;
  std::vector<double> alternating;
  for (int i = 0; i < 6; ++i) alternating.push_back(1.389 * (i % 2 ? 1 - x : 1 + x));
  CHECK(std::abs(flu(ring_table(alternating), ring_of(6), opts)) < 1e-14);
  opts.squared = true;
  CHECK(flu(ring_table(alternating), ring_of(6), opts) == doctest::Approx(x * x).epsilon(1e-12));
}

TEST_CASE("FLU is invariant under cyclic relabelling of the ring") {
  const std::vector<double> bonds{1.2, 1.5, 1.3, 1.6, 1.1, 1.4};
  const auto table = ring_table(bonds);
  const double reference = flu(table, ring_of(6));
  RingSpec r = ring_of(6);
  for (int shift = 1; shift < 6; ++shift) {
    std::rotate(r.atoms.begin(), r.atoms.begin() + 1, r.atoms.end());
    CHECK(flu(table, r) == doctest::Approx(reference).epsilon(1e-13));
  }
}

TEST_CASE("FLU per-bond references and domain checks") {
  FluOptions opts;
  opts.overrides[{"C2", "C1"}] = 2.0;
  CHECK(opts.reference_for("C1", "C2") == 2.0);
  CHECK(opts.reference_for("C3", "C2") == 1.389);
  opts.reference = -1.0;
  CHECK_THROWS_AS(flu(ring_table({1, 1, 1}), ring_of(3), opts), DomainError);
  CHECK_THROWS_AS(flu(ring_table({0, 0, 0}), ring_of(3)), DomainError);
  CHECK_THROWS_AS(flu(ring_table({1, 1, 1}), RingSpec{{"C1", "C2"}}), ContractError);
}

TEST_CASE("I_ring and MCI on the scalar three-ring") {
  AtomicOverlaps ov;
  ov.occupations = Eigen::VectorXd::Constant(1, 2.0);
  for (int a = 1; a <= 3; ++a) ov.atoms.emplace_back("C" + std::to_string(a), Eigen::MatrixXd::Constant(1, 1, 1.0 / 3.0));
  ov.validate();
  CHECK(i_ring(ov, ring_of(3)) == doctest::Approx(8.0 / 27.0).epsilon(1e-14));
  CHECK(mci(ov, ring_of(3)) == doctest::Approx(6 * 8.0 / 27.0 / 6).epsilon(1e-14));
  CHECK(mci(ov, ring_of(3), 4) == mci(ov, ring_of(3), 1));
}

TEST_CASE("zero overlaps give zero") {
  AtomicOverlaps ov;
  ov.occupations = Eigen::VectorXd::Constant(2, 1.0);
  ov.atoms = {{"C1", Eigen::MatrixXd::Zero(2, 2)}, {"C2", Eigen::MatrixXd::Zero(2, 2)}, {"C3", Eigen::MatrixXd::Zero(2, 2)}};
  CHECK(i_ring(ov, ring_of(3)) == 0.0);
}

TEST_CASE("matrix-product I_ring equals the explicit index sum") {
  std::mt19937_64 rng(31);
  for (std::size_t atoms = 3; atoms <= 4; ++atoms)
    for (std::size_t orbitals = 1; orbitals <= 4; ++orbitals) {
      const auto ov = random_overlaps(atoms, std::max(orbitals, atoms), rng);
      ov.validate();
      CHECK(std::abs(i_ring(ov, ring_of(atoms)) - i_ring_brute(ov, ring_of(atoms))) < 1e-12);
    }
}

TEST_CASE("overlap validation") {
  AtomicOverlaps ov;
  ov.occupations = Eigen::VectorXd::Constant(1, 2.0);
  ov.atoms = {{"C1", Eigen::MatrixXd::Constant(1, 1, 0.5)}};
  CHECK_THROWS_AS(ov.validate(), InputError);
  ov.atoms.emplace_back("C2", Eigen::MatrixXd::Constant(1, 1, 0.5));
  CHECK_NOTHROW(ov.validate());
  ov.occupations[0] = 2.5;
  CHECK_THROWS_AS(ov.validate(), InputError);
  CHECK_THROWS_AS(i_ring(ov, RingSpec{{"C1", "C2", "C9"}}), InputError);
  RingSpec big;
  for (int a = 0; a < 9; ++a) big.atoms.push_back("X" + std::to_string(a));
  CHECK_THROWS_AS(mci(ov, big), ContractError);
}

TEST_CASE("HOMA") {
  CHECK(homa(std::vector<double>(6, 1.388)) == 1.0);
  CHECK(homa({1.388, 1.388, 1.388, 1.388, 1.388, 1.50}) == doctest::Approx(1 - 257.7 / 6 * 0.112 * 0.112).epsilon(1e-12));
  CHECK(homa({1.0, 1.1}, 1.0, 10.0) == doctest::Approx(1 - 10.0 / 2 * 0.01));
  double previous = 1.0;
  for (double dr : {0.01, 0.02, 0.05, 0.1}) {
    const double h = homa({1.388, 1.388, 1.388 + dr});
    CHECK(h < previous);
    previous = h;
  }
  CHECK_THROWS_AS(homa({}), ContractError);
}

}
