#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "meao/error.hpp"
#include "meao/models.hpp"

namespace meao {

namespace {

void orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& basis, Eigen::Index cols) {
  // two passes of classical Gram-Schmidt
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index c = 0; c < cols; ++c) v -= basis.col(c).dot(v) * basis.col(c);
}

struct RitzPair {
  double value;
  Eigen::VectorXd vector;
  double residual;
};

// Lowest eigenpair of h restricted to the orthogonal complement of `locked`.
RitzPair lowest_in_complement(const Eigen::SparseMatrix<double>& h, const Eigen::MatrixXd& locked,
                              Eigen::Index n_locked, std::mt19937_64& rng, const EigenOptions& opts) {
  const Eigen::Index dim = h.rows();
  const Eigen::Index m_max = std::min<Eigen::Index>(static_cast<Eigen::Index>(opts.max_krylov), dim - n_locked);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (Eigen::Index q = 0; q < dim; ++q) v[q] = normal(rng);
  orthogonalize(v, locked, n_locked);
  v.normalize();

  Eigen::MatrixXd q_basis(dim, m_max);
  std::vector<double> alpha, beta;
  RitzPair best{0.0, {}, std::numeric_limits<double>::infinity()};
  for (Eigen::Index m = 0; m < m_max; ++m) {
    q_basis.col(m) = v;
    Eigen::VectorXd w = h * v;
    alpha.push_back(v.dot(w));
    orthogonalize(w, q_basis, m + 1);
    orthogonalize(w, locked, n_locked);
    const double b = w.norm();
    const bool exhausted = b < 1e-12 || m + 1 == m_max;
    if ((m + 1) % 10 == 0 || exhausted) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, m + 1);
      for (Eigen::Index r = 0; r <= m; ++r) {
        t(r, r) = alpha[static_cast<std::size_t>(r)];
        if (r < m) t(r, r + 1) = t(r + 1, r) = beta[static_cast<std::size_t>(r)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      const double estimate = std::abs(b * es.eigenvectors()(m, 0));
      if (estimate < 0.1 * opts.residual_tolerance || exhausted) {
        Eigen::VectorXd x = q_basis.leftCols(m + 1) * es.eigenvectors().col(0);
        x.normalize();
        const double theta = x.dot(h * x);
        best = {theta, x, (h * x - theta * x).norm()};
        if (best.residual < 0.1 * opts.residual_tolerance || exhausted) return best;
      }
    }
    beta.push_back(b);
    v = w / b;
  }
  return best;
}

}  // namespace

LanczosResult lanczos_lowest(const Eigen::SparseMatrix<double>& h, std::size_t k, const EigenOptions& opts) {
  const Eigen::Index dim = h.rows();
  if (h.cols() != dim) throw ContractError("Lanczos needs a square matrix");
  if (k < 1 || static_cast<Eigen::Index>(k) > dim) throw ContractError("Lanczos: k out of range");
  std::mt19937_64 rng(opts.seed);
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd locked(dim, kk);

  for (Eigen::Index found = 0; found < kk; ++found) {
    RitzPair p = lowest_in_complement(h, locked, found, rng, opts);
    // Retry from fresh random starts until converged.
    for (int restart = 0; p.residual > 0.1 * opts.residual_tolerance && restart < 20; ++restart) {
      auto q = lowest_in_complement(h, locked, found, rng, opts);
      if (q.residual < p.residual) p = std::move(q);
    }
    if (p.residual > opts.residual_tolerance) throw SolverError("Lanczos did not converge", p.residual);
    Eigen::VectorXd x = p.vector;
    orthogonalize(x, locked, found);
    locked.col(found) = x.normalized();
  }

  // Rayleigh-Ritz inside the converged span.
  const Eigen::MatrixXd projected = locked.transpose() * (h * locked);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (projected + projected.transpose()));
  LanczosResult out;
  out.values = es.eigenvalues();
  out.vectors = locked * es.eigenvectors();
  out.max_residual = 0.0;
  for (Eigen::Index c = 0; c < kk; ++c)
    out.max_residual = std::max(out.max_residual, (h * out.vectors.col(c) - out.values[c] * out.vectors.col(c)).norm());
  if (out.max_residual > opts.residual_tolerance) throw SolverError("Lanczos Ritz refinement failed", out.max_residual);
  return out;
}

}  // namespace meao
