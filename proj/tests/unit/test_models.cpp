#include <doctest.h>

#include <cmath>
#include <numbers>

#include "meao/entanglement.hpp"
#include "meao/error.hpp"
#include "meao/models.hpp"

using namespace meao;

namespace {

struct DimerPoint {
  double u, energy, site_entropy;
};

// Exact ground state of the two-site Hubbard model, t = 1, one electron per spin.
const DimerPoint kDimer[] = {
    {0, -2.0, 1.386294361119891},
    {1, -1.561552812808831, 1.356587239101213},
    {2, -1.236067977499790, 1.282661666294993},
    {4, -0.828427124746190, 1.109642711259633},
    {8, -0.472135954999580, 0.899786494444929},
    {16, -0.246211251235322, 0.770731365462317},
    {32, -0.124515496597110, 0.718455976596825},
    {1000, -0.003999983999880, 0.693200896820138},
};

double site_entropy(const WaveFunction& wf) {
  const std::size_t s[] = {0};
  return subset_entropy(wf, s);
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("sector basis") {
  const auto b = make_sector_basis(4, 2, 1);
  CHECK(b.dimension() == 24);
  CHECK(std::is_sorted(b.configs.begin(), b.configs.end()));
  for (auto c : b.configs) {
    CHECK(spin_count(c, Spin::Up) == 2);
    CHECK(spin_count(c, Spin::Down) == 1);
  }
  CHECK(b.find(b.configs[7]) == 7);
  CHECK(b.find(0) == b.dimension());
}

TEST_CASE("Hamiltonians are symmetric") {
  for (const auto& spec : {chain_spec(4, 1.0, 3.0, 2, 2), ring_spec(5, 0.7, 1.0, 3, 2),
                           dimerized_ring_spec(6, 1.0, 0.2, 2.0, 3, 3), ionic_dimer_spec(2.5, 1, 1)})
    CHECK(build_hamiltonian(spec).hermiticity_error() <= 1e-12);
}

TEST_CASE("Hubbard dimer ground states") {
  for (const auto& p : kDimer) {
    CAPTURE(p.u);
    const auto sol = lowest_eigenstates(build_hamiltonian(chain_spec(2, 1.0, p.u, 1, 1)), 1);
    CHECK(sol.pairs[0].energy == doctest::Approx(p.energy).epsilon(1e-10));
    CHECK(site_entropy(sol.pairs[0].state) == doctest::Approx(p.site_entropy).epsilon(1e-9));
    CHECK(sol.pairs[0].state.sector() == std::pair{1, 1});
  }
}

TEST_CASE("U = 0 dimer ground state is the doubly occupied bonding orbital") {
  const auto gs = lowest_eigenstates(build_hamiltonian(chain_spec(2, 1.0, 0.0, 1, 1)), 1).pairs[0].state;
  double best = 0.0;
  for (double t : {std::numbers::pi / 4, -std::numbers::pi / 4})
    best = std::max(best, std::abs(gs.overlap(rotate_wavefunction(bonding_product_state(), 0, 1, t))));
  CHECK(best == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("tight-binding ground energy drops as hopping grows") {
  double previous = 0.0;
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    const double e = lowest_eigenstates(build_hamiltonian(chain_spec(4, t, 0.0, 2, 2)), 1).pairs[0].energy;
    CHECK(e < previous);
    previous = e;
  }
}

TEST_CASE("Lanczos agrees with dense diagonalization") {
  const auto h = build_hamiltonian(ring_spec(6, 1.0, 2.0, 3, 3));
  EigenOptions dense, krylov;
  krylov.dense_limit = 10;
  const auto a = lowest_eigenstates(h, 4, dense);
  const auto b = lowest_eigenstates(h, 4, krylov);
  for (std::size_t k = 0; k < 4; ++k) CHECK(a.pairs[k].energy == doctest::Approx(b.pairs[k].energy).epsilon(1e-10));
  CHECK(std::abs(std::abs(a.pairs[0].state.overlap(b.pairs[0].state)) - 1.0) < 1e-9);
}

TEST_CASE("Lanczos runs above the dense limit") {
  const auto h = build_hamiltonian(ring_spec(8, 1.0, 4.0, 4, 4));
  REQUIRE(h.basis.dimension() == 4900);
  const auto sol = lowest_eigenstates(h, 1);
  Eigen::VectorXd v(static_cast<Eigen::Index>(h.basis.dimension()));
  for (std::size_t q = 0; q < h.basis.dimension(); ++q)
    v[static_cast<Eigen::Index>(q)] = sol.pairs[0].state.amplitude(h.basis.configs[q]).real();
  CHECK((h.matrix * v - sol.pairs[0].energy * v).norm() < 1e-9);
}

TEST_CASE("eigenvector signs are fixed") {
  const auto a = lowest_eigenstates(build_hamiltonian(chain_spec(3, 1.0, 1.0, 2, 1)), 2);
  const auto b = lowest_eigenstates(build_hamiltonian(chain_spec(3, 1.0, 1.0, 2, 1)), 2);
  for (std::size_t k = 0; k < 2; ++k) CHECK(a.pairs[k].state.overlap(b.pairs[k].state).real() == doctest::Approx(1.0));
}

TEST_CASE("all-Sz collection merges sectors in energy order") {
  const auto sol = lowest_eigenstates_all_sz(ionic_dimer_spec(3.0, 1, 1), 2, 4);
  REQUIRE(sol.pairs.size() == 4);
  for (std::size_t k = 1; k < 4; ++k) CHECK(sol.pairs[k - 1].energy <= sol.pairs[k].energy);
  int polarized = 0;
  for (const auto& p : sol.pairs)
    if (p.state.sector() != std::pair{1, 1}) ++polarized;
  CHECK(polarized == 2);  // the triplet's Sz = ±1 partners
}

TEST_CASE("ionic dimer thermal mutual information") {
  const std::pair<double, double> points[] = {{1.0, 0.705808865527}, {4.0, 0.809621097481}, {8.0, 0.413867057981},
                                              {10.0, 0.010695578232}};
  for (auto [r, expected] : points) {
    CAPTURE(r);
    const auto sol = lowest_eigenstates_all_sz(ionic_dimer_spec(r, 1, 1), 2, 4);
    const auto st = thermal_state(sol.pairs, 1e3);
    CHECK(mutual_information(st, 0, 1).normalized == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(chain_spec(2, 1.0, 1.0, 3, 0), InputError);
  CHECK_THROWS_AS(ring_spec(0, 1.0, 1.0, 0, 0), InputError);
  CHECK_THROWS_AS(dimerized_ring_spec(5, 1.0, 0.2, 1.0, 2, 2), InputError);
  CHECK_THROWS_AS(ionic_dimer_spec(0.0, 1, 1), InputError);
  LatticeSpec s = chain_spec(3, 1.0, 1.0, 1, 1);
  s.hoppings.push_back({1, 1, 0.5});
  CHECK_THROWS_AS(s.validate(), InputError);
  CHECK_THROWS_AS(lowest_eigenstates(build_hamiltonian(chain_spec(2, 1.0, 0.0, 1, 1)), 5), ContractError);
}

TEST_CASE("scan evaluates every grid point in order") {
  const auto rows = scan(
      {0.0, 2.0}, [](double u) { return chain_spec(2, 1.0, u, 1, 1); },
      [](const LatticeSpec& s) {
        return std::map<std::string, double>{{"E0", lowest_eigenstates(build_hamiltonian(s), 1).pairs[0].energy}};
      });
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].parameter == 0.0);
  CHECK(rows[1].values.at("E0") == doctest::Approx(-1.236067977499790));
  const auto one = scan({1.0}, [](double u) { return u; }, [](double u) { return std::map<std::string, double>{{"u", u}}; });
  CHECK(one.size() == 1);
}

TEST_CASE("a failing scan point carries its parameter and cause") {
  try {
    scan({1.0, -1.0}, [](double r) { return ionic_dimer_spec(r, 1, 1); },
         [](const LatticeSpec&) { return std::map<std::string, double>{}; });
    FAIL("expected ScanError");
  } catch (const ScanError& e) {
    CHECK(e.parameter() == -1.0);
    CHECK_THROWS_AS(std::rethrow_if_nested(e), InputError);
  }
}

}
