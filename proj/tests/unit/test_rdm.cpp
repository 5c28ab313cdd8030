#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dense_fock.hpp"
#include "meao/error.hpp"
#include "meao/rdm.hpp"

using namespace meao;

namespace {

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<std::vector<std::size_t>> subsets_of(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t o = 0; o < n; ++o)
      if ((mask >> o) & 1U) s.push_back(o);
    out.push_back(s);
    if (s.size() >= 2) {  // one reversed ordering as well
      std::reverse(s.begin(), s.end());
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("rdm") {

TEST_CASE("reduced density operator matches the dense construction") {
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 3; ++n) {
    testing::DenseFock fock(n);
    for (int trial = 0; trial < 3; ++trial) {
      const MixedState generic = testing::random_state(n, rng);
      const MixedState sector = testing::random_state(n, rng, static_cast<int>((n + 1) / 2), static_cast<int>(n / 2));
      for (const auto* state : {&generic, &sector})
        for (const auto& s : subsets_of(n)) {
          const auto rho = reduced_density_operator(*state, s);
          CHECK(max_diff(rho.matrix, fock.reduced(*state, s)) < 1e-12);
        }
    }
  }
}

TEST_CASE("reduced density of a thermal ensemble matches the dense construction on 4 orbitals") {
  std::mt19937_64 rng(5);
  testing::DenseFock fock(4);
  std::vector<MixedState::Member> members;
  members.push_back({0.6, testing::random_state(4, rng, 2, 2)});
  members.push_back({0.4, testing::random_state(4, rng, 2, 1)});
  const MixedState state(members);
  for (std::vector<std::size_t> s : {std::vector<std::size_t>{2}, {0, 3}, {3, 1}, {1, 2, 3}})
    CHECK(max_diff(reduced_density_operator(state, s).matrix, fock.reduced(state, s)) < 1e-12);
}

TEST_CASE("mixed-spin 2RDM matches operator expectation values") {
  std::mt19937_64 rng(9);
  for (std::size_t n = 1; n <= 3; ++n) {
    testing::DenseFock fock(n);
    const MixedState state = testing::random_state(n, rng);
    const auto g = two_rdm_mixed(state);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) err = std::max(err, std::abs(g(i, j, k, l) - fock.gamma(state, i, j, k, l)));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("2RDM trace and hermiticity on number eigenstates") {
  std::mt19937_64 rng(1);
  const auto wf = testing::random_state(4, rng, 2, 3);
  const auto g = two_rdm_mixed(wf);
  CHECK(std::abs(g.trace() - Complex(6.0)) < 1e-10);
  CHECK(g.hermiticity_error() < 1e-12);
  CHECK(g.all_finite());
}

TEST_CASE("ideal bond RDMs") {
  const auto wf = ideal_bond_state();
  const auto g1 = one_rdm(wf);
  for (const auto* m : {&g1.up, &g1.down})
    CHECK(max_diff(*m, Eigen::MatrixXcd::Constant(2, 2, 0.5)) < 1e-14);
  const auto g = two_rdm_mixed(wf);
  CHECK(std::abs(g(0, 0, 1, 1) - Complex(0.25)) < 1e-14);
}

TEST_CASE("doubly occupied orbital") {
  const auto g = two_rdm_mixed(bonding_product_state());
  CHECK(std::abs(g(0, 0, 0, 0) - Complex(1.0)) < 1e-14);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          if (i + j + k + l > 0) CHECK(std::abs(g(i, j, k, l)) < 1e-14);
}

TEST_CASE("reduced spectra of sector states sum to one and are non-negative") {
  std::mt19937_64 rng(21);
  const auto wf = testing::random_state(4, rng, 2, 2);
  for (std::vector<std::size_t> s : {std::vector<std::size_t>{0}, {1, 3}, {0, 1, 2}}) {
    const auto spec = reduced_spectrum(wf, s);
    double total = 0.0;
    for (double x : spec) {
      CHECK(x > -1e-12);
      total += x;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const auto dense = reduced_density_operator(wf, s).matrix;
    CHECK(reduced_purity(wf, s) == doctest::Approx((dense * dense).trace().real()).epsilon(1e-12));
  }
}

TEST_CASE("thermal weights") {
  const double gap = 0.7;
  const double beta = std::log(3.0) / gap;
  std::vector<Eigenpair> pairs;
  pairs.push_back({-1.0, ideal_bond_state()});
  for (int k = 0; k < 3; ++k) pairs.push_back({-1.0 + gap, ionic_state(0.1 * k)});
  const auto state = thermal_state(pairs, beta);
  REQUIRE(state.members().size() == 4);
  CHECK(state.members()[0].weight == doctest::Approx(0.5).epsilon(1e-14));
  for (int k = 1; k < 4; ++k) CHECK(state.members()[static_cast<std::size_t>(k)].weight == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(thermal_state(pairs, 0.0), DomainError);
}

TEST_CASE("ensemble weights are validated") {
  std::vector<MixedState::Member> bad{{0.7, ideal_bond_state()}, {0.7, ionic_state(1.0)}};
  CHECK_THROWS(MixedState(bad));
  std::vector<MixedState::Member> negative{{1.2, ideal_bond_state()}, {-0.2, ionic_state(1.0)}};
  CHECK_THROWS(MixedState(negative));
}

TEST_CASE("subset preconditions") {
  const auto wf = ideal_bond_state();
  const std::size_t dup[] = {0, 0};
  const std::size_t out[] = {2};
  CHECK_THROWS_AS(reduced_density_operator(wf, dup), ContractError);
  CHECK_THROWS_AS(reduced_density_operator(wf, out), ContractError);
  CHECK_THROWS_AS(reduced_density_operator(wf, std::span<const std::size_t>{}), ContractError);
}

}
