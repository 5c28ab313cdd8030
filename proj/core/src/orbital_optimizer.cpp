#include "meao/orbital_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "meao/error.hpp"

namespace meao {

namespace {

void check_dims(const TwoRDM& gamma, const AtomicPartition& partition) {
  if (gamma.n_orbitals() != partition.n_orbitals())
    throw ContractError("2RDM has " + std::to_string(gamma.n_orbitals()) + " orbitals, partition has " +
                        std::to_string(partition.n_orbitals()));
}

// Truncated Taylor expansion (value, first, second derivative) in θ.
struct Jet {
  Complex v{}, d1{}, d2{};

  Jet& operator+=(const Jet& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
};

Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

Jet operator*(const Jet& a, Complex s) { return {a.v * s, a.d1 * s, a.d2 * s}; }

struct Term {
  std::size_t source;
  Jet factor;
};

// Row x of J^(kl)(θ) expanded at θ = 0: J_kk = c, J_kl = -s, J_lk = s, J_ll = c.
int jacobi_row(std::size_t x, std::size_t k, std::size_t l, Term (&out)[2]) {
  const Jet cos0{1.0, 0.0, -1.0};
  const Jet sin0{0.0, 1.0, 0.0};
  const Jet msin0{0.0, -1.0, 0.0};
  if (x == k) {
    out[0] = {k, cos0};
    out[1] = {l, msin0};
    return 2;
  }
  if (x == l) {
    out[0] = {k, sin0};
    out[1] = {l, cos0};
    return 2;
  }
  out[0] = {x, Jet{1.0, 0.0, 0.0}};
  return 1;
}

Jet element_jet(const TwoRDM& g, std::size_t a, std::size_t b, std::size_t c, std::size_t d, std::size_t k,
                std::size_t l) {
  Term ra[2], rb[2], rc[2], rd[2];
  const int na = jacobi_row(a, k, l, ra), nb = jacobi_row(b, k, l, rb), nc = jacobi_row(c, k, l, rc),
            nd = jacobi_row(d, k, l, rd);
  Jet total;
  for (int p = 0; p < na; ++p)
    for (int q = 0; q < nb; ++q) {
      const Jet ab = ra[p].factor * rb[q].factor;
      for (int r = 0; r < nc; ++r) {
        const Jet abc = ab * rc[r].factor;
        for (int s = 0; s < nd; ++s)
          total += (abc * rd[s].factor) * g(ra[p].source, rb[q].source, rc[r].source, rd[s].source);
      }
    }
  return total;
}

// |G(θ)|² expanded from the jet of G.
void accumulate_square(const Jet& j, double& d1, double& d2) {
  d1 += 2.0 * (std::conj(j.v) * j.d1).real();
  d2 += 2.0 * std::norm(j.d1) + 2.0 * (std::conj(j.v) * j.d2).real();
}

void check_pair(std::size_t n, std::size_t k, std::size_t l) {
  if (k == l) throw ContractError("Jacobi rotation needs two distinct orbitals");
  if (k >= n || l >= n) throw ContractError("Jacobi rotation orbital out of range");
}

}  // namespace

double f_meao(const TwoRDM& gamma, const AtomicPartition& partition) {
  check_dims(gamma, partition);
  const std::size_t n = gamma.n_orbitals();
  double f = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (partition.same_atom(i, j)) continue;
      f += std::norm(gamma(i, i, j, j)) + std::norm(gamma(i, j, j, i));
    }
  return f;
}

void rotate_2rdm_jacobi_inplace(TwoRDM& g, std::size_t k, std::size_t l, double theta) {
  const std::size_t n = g.n_orbitals();
  check_pair(n, k, l);
  const double c = std::cos(theta), s = std::sin(theta);
  auto mix = [c, s](Complex& xk, Complex& xl) {
    const Complex a = xk, b = xl;
    xk = c * a - s * b;
    xl = s * a + c * b;
  };
  // One full pass per index position; the passes commute but must not interleave.
  for (int pos = 0; pos < 4; ++pos)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          switch (pos) {
            case 0: mix(g(k, x, y, z), g(l, x, y, z)); break;
            case 1: mix(g(x, k, y, z), g(x, l, y, z)); break;
            case 2: mix(g(x, y, k, z), g(x, y, l, z)); break;
            default: mix(g(x, y, z, k), g(x, y, z, l)); break;
          }
        }
}

TwoRDM rotate_2rdm_jacobi(const TwoRDM& gamma, std::size_t k, std::size_t l, double theta) {
  TwoRDM out = gamma;
  rotate_2rdm_jacobi_inplace(out, k, l, theta);
  return out;
}

TwoRDM rotate_2rdm(const TwoRDM& gamma, const RotationSchedule& schedule) {
  if (schedule.n_orbitals() != gamma.n_orbitals()) throw ContractError("rotate_2rdm: orbital counts differ");
  TwoRDM out = gamma;
  for (const auto& st : schedule.steps()) rotate_2rdm_jacobi_inplace(out, st.k, st.l, st.theta);
  return out;
}

DirectionalDerivatives f_directional(const TwoRDM& gamma, const AtomicPartition& partition, std::size_t k,
                                     std::size_t l) {
  check_dims(gamma, partition);
  const std::size_t n = gamma.n_orbitals();
  check_pair(n, k, l);
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (partition.same_atom(i, j)) continue;
      if (i != k && i != l && j != k && j != l) continue;
      accumulate_square(element_jet(gamma, i, i, j, j, k, l), d1, d2);
      accumulate_square(element_jet(gamma, i, j, j, i, k, l), d1, d2);
    }
  return {f_meao(gamma, partition), d1, d2};
}

std::vector<double> f_gradient(const TwoRDM& gamma, const AtomicPartition& partition,
                               std::span<const OrbitalPair> pairs) {
  std::vector<double> g;
  g.reserve(pairs.size());
  for (const auto& [k, l] : pairs) g.push_back(f_directional(gamma, partition, k, l).gradient);
  return g;
}

std::vector<double> f_gradient(const TwoRDM& gamma, const AtomicPartition& partition) {
  const auto pairs = intra_atom_pairs(partition);
  return f_gradient(gamma, partition, pairs);
}

std::vector<double> f_hessian_diag(const TwoRDM& gamma, const AtomicPartition& partition,
                                   std::span<const OrbitalPair> pairs) {
  std::vector<double> h;
  h.reserve(pairs.size());
  for (const auto& [k, l] : pairs) h.push_back(f_directional(gamma, partition, k, l).curvature);
  return h;
}

std::vector<double> f_hessian_diag(const TwoRDM& gamma, const AtomicPartition& partition) {
  const auto pairs = intra_atom_pairs(partition);
  return f_hessian_diag(gamma, partition, pairs);
}

TwoRDM mean_field_2rdm(const OneRDM& gamma) {
  const std::size_t n = gamma.n_orbitals();
  if (static_cast<std::size_t>(gamma.down.rows()) != n) throw ContractError("mean_field_2rdm: spin blocks differ in size");
  TwoRDM out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          out(i, j, k, l) = gamma.up(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) *
                            gamma.down(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
  return out;
}

// ---------------------------------------------------------------------------

void OptimizerOptions::validate() const {
  if (!(tolerance > 0.0)) throw DomainError("optimizer tolerance must be positive");
  if (restarts < 1) throw DomainError("optimizer needs at least one restart");
  if (max_sweeps < 1) throw DomainError("optimizer needs at least one sweep");
  if (!(damping > 0.0)) throw DomainError("optimizer damping must be positive");
  if (!(restart_scale >= 0.0)) throw DomainError("restart scale must be non-negative");
}

std::vector<OrbitalPair> rotation_pairs(const AtomicPartition& partition, RotationSpace space) {
  return space == RotationSpace::IntraAtom ? intra_atom_pairs(partition) : all_orbital_pairs(partition.n_orbitals());
}

namespace {

constexpr int kScanPoints = 32;
constexpr int kMaxHalvings = 6;

bool improves(double f_new, double f_old) { return f_new - f_old > 1e-15 * std::max(1.0, std::abs(f_old)); }

struct SingleRun {
  RotationSchedule schedule;
  double f_final;
  std::vector<double> history;
  bool converged = false;
  int sweeps = 0;
  int accepted = 0;
};

SingleRun run_sweeps(TwoRDM gamma, const AtomicPartition& partition, std::span<const OrbitalPair> pairs,
                     const OptimizerOptions& opts, RotationSchedule schedule) {
  using std::numbers::pi;
  SingleRun run{std::move(schedule), f_meao(gamma, partition), {}};
  run.history.push_back(run.f_final);
  double f = run.f_final;

  auto value_at = [&](std::size_t k, std::size_t l, double theta) {
    return f_meao(rotate_2rdm_jacobi(gamma, k, l, theta), partition);
  };

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const double f_start = f;
    for (const auto& [k, l] : pairs) {
      const auto d = f_directional(gamma, partition, k, l);
      const bool concave = d.curvature < -1e-14;
      double theta = concave ? -d.gradient / d.curvature : opts.damping * d.gradient;
      theta = std::clamp(theta, concave ? -pi / 4 : -pi / 8, concave ? pi / 4 : pi / 8);

      double best_theta = 0.0, best_f = f;
      if (theta != 0.0) {
        double trial = theta;
        for (int h = 0; h <= kMaxHalvings; ++h, trial *= 0.5) {
          const double ft = value_at(k, l, trial);
          if (improves(ft, f)) {
            best_theta = trial;
            best_f = ft;
            break;
          }
          if (!concave) break;
        }
      }
      // Non-concave directions (saddles, minima, flat plateaus) also get a
      // coarse scan over a full period; the better of the two is taken.
      if (!concave) {
        for (int m = 1; m < kScanPoints; ++m) {
          const double trial = -pi / 2 + pi * static_cast<double>(m) / kScanPoints;
          const double ft = value_at(k, l, trial);
          if (improves(ft, best_f)) {
            best_theta = trial;
            best_f = ft;
          }
        }
      }
      if (best_theta != 0.0) {
        rotate_2rdm_jacobi_inplace(gamma, k, l, best_theta);
        run.schedule.append(k, l, best_theta);
        f = f_meao(gamma, partition);
        ++run.accepted;
      }
    }
    ++run.sweeps;
    run.history.push_back(f);
    if (f - f_start < opts.tolerance) {
      run.converged = true;
      break;
    }
  }
  run.f_final = f;
  return run;
}

}  // namespace

MeaoResult optimize_meao(const TwoRDM& gamma, const AtomicPartition& partition, const OptimizerOptions& opts) {
  check_dims(gamma, partition);
  opts.validate();
  if (!gamma.all_finite()) throw InputError("2RDM contains non-finite entries");

  const auto pairs = rotation_pairs(partition, opts.rotation_space);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> angle(-opts.restart_scale, opts.restart_scale);

  std::vector<RestartSummary> summaries;
  std::optional<SingleRun> best;
  std::size_t best_index = 0;
  for (int r = 0; r < opts.restarts; ++r) {
    RotationSchedule start(gamma.n_orbitals());
    TwoRDM g = gamma;
    if (r > 0) {
      for (const auto& [k, l] : pairs) {
        const double theta = angle(rng);
        rotate_2rdm_jacobi_inplace(g, k, l, theta);
        start.append(k, l, theta);
      }
    }
    SingleRun run = run_sweeps(std::move(g), partition, pairs, opts, std::move(start));
    summaries.push_back({run.f_final, run.sweeps, run.accepted, run.converged});
    if (!best || run.f_final > best->f_final + 1e-12) {
      best = std::move(run);
      best_index = static_cast<std::size_t>(r);
    }
    // Without rotation pairs every restart is identical.
    if (pairs.empty()) break;
  }

  return MeaoResult{std::move(best->schedule), best->f_final,   std::move(best->history), best->converged,
                    best->sweeps,              best->accepted, best_index,               std::move(summaries)};
}

}  // namespace meao
