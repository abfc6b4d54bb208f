#pragma once
// Linearized operator L = -d^2/dy^2 + 1 - 5Q^4 around the ground state.
// Kernel is span{Q'}; the discrete solve is a bordered system that pins the
// Q'-component of the solution and absorbs the Q'-component of the source
// into a Lagrange multiplier. Dirichlet eigenpairs come from shifted inverse
// iteration with a Rayleigh-quotient polish.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "gkdvlab/ground.hpp"
#include "gkdvlab/grid.hpp"

namespace gkdv {

namespace detail {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// interior rows of -D2 + diag(pot); boundary rows are identity
inline void operator_rows(const Grid& g, const Vec& pot, std::vector<Triplet>& trip) {
  Vec nodes(7);
  for (int j = 0; j < 7; ++j) nodes[j] = j;
  std::vector<Vec> st(7);
  for (int off = 0; off < 7; ++off) {
    st[off] = fornberg(static_cast<double>(off), nodes, 2)[2];
    for (double& v : st[off]) v /= g.h * g.h;
  }
  trip.emplace_back(0, 0, 1.0);
  trip.emplace_back(g.n - 1, g.n - 1, 1.0);
  for (int i = 1; i < g.n - 1; ++i) {
    int b = i - 3;
    if (b < 0) b = 0;
    if (b > g.n - 7) b = g.n - 7;
    const Vec& row = st[i - b];
    for (int j = 0; j < 7; ++j) trip.emplace_back(i, b + j, -row[j]);
    trip.emplace_back(i, i, pot[i]);
  }
}

}  // namespace detail

struct FluxSolution {
  Vec f;
  double mult = 0;    // kernel multiplier absorbed by the bordered solve
  double compat = 0;  // (g, Q), the solvability defect of (Lf)' = g
};

class OperatorL {
 public:
  explicit OperatorL(const Grid& g) : g_(&g) {
    const int n = g.n;
    Q_ = ground_vec(g.y);
    Qp_ = ground_vec(g.y, 1);
    pot_.resize(n);
    for (int i = 0; i < n; ++i) {
      const double q2 = Q_[i] * Q_[i];
      pot_[i] = 1.0 - 5.0 * q2 * q2;
    }
    std::vector<detail::Triplet> trip;
    trip.reserve(8 * n + 2 * n);
    detail::operator_rows(g, pot_, trip);
    // border: column Q' (zero at the Dirichlet rows), row of Simpson-weighted Q'
    for (int i = 1; i < n - 1; ++i)
      if (Qp_[i] != 0.0) trip.emplace_back(i, n, Qp_[i]);
    for (int i = 0; i < n; ++i) {
      const double v = g.w[i] * Qp_[i];
      if (v != 0.0) trip.emplace_back(n, i, v);
    }
    detail::SpMat A(n + 1, n + 1);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    lu_.analyzePattern(A);
    lu_.factorize(A);
    if (lu_.info() != Eigen::Success)
      throw std::runtime_error("bordered factorization failed");
  }

  const Grid& grid() const { return *g_; }
  const Vec& Q() const { return Q_; }
  const Vec& Qp() const { return Qp_; }

  // true operator application, no boundary rows
  Vec apply(const Vec& f) const {
    Vec d2 = g_->d2(f), out(g_->n);
    for (int i = 0; i < g_->n; ++i) out[i] = -d2[i] + pot_[i] * f[i];
    return out;
  }

  // solve L f = rhs - mult Q' with (f, Q') = 0; rhs must be kernel compatible
  std::pair<Vec, double> solve(const Vec& rhs) const {
    const int n = g_->n;
    if (static_cast<int>(rhs.size()) != n) throw std::runtime_error("rhs length mismatch");
    const double proj = g_->inner(rhs, Qp_);
    if (std::abs(proj) > 1e-8 * std::max(g_->norm2(rhs), 1e-300))
      throw std::runtime_error("source not orthogonal to kernel");
    Eigen::VectorXd b(n + 1);
    for (int i = 0; i < n; ++i) b[i] = rhs[i];
    b[0] = b[n - 1] = 0.0;
    b[n] = 0.0;
    Eigen::VectorXd sol = lu_.solve(b);
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = sol[i];
    return {std::move(f), sol[n]};
  }

  // f with (L f)' = g - mult Q''; Ghat must satisfy Ghat' = g
  FluxSolution solve_flux(const Vec& g, const Vec& dg, const Vec& Ghat) const {
    const int n = g_->n;
    Vec q(n);
    for (int i = 0; i < n; ++i) {
      const double q2 = Q_[i] * Q_[i];
      q[i] = dg[i] + 5.0 * q2 * q2 * Ghat[i];
    }
    auto [h, mult] = solve(q);
    FluxSolution out;
    out.f.resize(n);
    for (int i = 0; i < n; ++i) out.f[i] = h[i] + Ghat[i];
    out.mult = mult;
    out.compat = g_->inner(g, Q_);
    return out;
  }

 private:
  const Grid* g_;
  Vec Q_, Qp_, pot_;
  Eigen::SparseLU<detail::SpMat, Eigen::COLAMDOrdering<int>> lu_;
};

struct Eigenpair {
  double value = 0;
  Vec vec;        // L2-normalized, sign fixed by the largest component
  double resid = 0;  // ||A v - value v||_2 in the Dirichlet discretization
  int iters = 0;
};

namespace detail {

inline SpMat dirichlet_matrix(const Grid& g) {
  Vec Q = ground_vec(g.y), pot(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double q2 = Q[i] * Q[i];
    pot[i] = 1.0 - 5.0 * q2 * q2;
  }
  std::vector<Triplet> trip;
  trip.reserve(8 * g.n);
  operator_rows(g, pot, trip);
  SpMat A(g.n, g.n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

inline Eigenpair inverse_iteration(const SpMat& A, const Grid& g, double sigma,
                                   const std::vector<Vec>& deflate) {
  const int n = g.n;
  auto shifted = [&](double s) {
    SpMat M = A;
    for (int i = 1; i < n - 1; ++i) M.coeffRef(i, i) -= s;
    M.makeCompressed();
    return M;
  };
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  {
    SpMat M = shifted(sigma);
    lu.analyzePattern(M);
    lu.factorize(M);
    if (lu.info() != Eigen::Success) throw std::runtime_error("shifted factorization failed");
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uni(rng);
  v[0] = v[n - 1] = 0.0;
  auto project_out = [&](Eigen::VectorXd& x) {
    for (const Vec& u : deflate) {
      double num = 0, den = 0;
      for (int i = 0; i < n; ++i) {
        num += x[i] * u[i];
        den += u[i] * u[i];
      }
      const double c = num / den;
      for (int i = 0; i < n; ++i) x[i] -= c * u[i];
    }
  };
  project_out(v);
  v /= v.norm();

  double rho_prev = 1e300;
  int refactors = 0;
  Eigenpair out;
  for (int it = 1; it <= 400; ++it) {
    Eigen::VectorXd w = lu.solve(v);
    w[0] = w[n - 1] = 0.0;
    project_out(w);
    w /= w.norm();
    Eigen::VectorXd Aw = A * w;
    const double rho = w.dot(Aw);
    out.iters = it;
    if (std::abs(rho - rho_prev) <= 1e-12 * std::max(1.0, std::abs(rho))) {
      out.value = rho;
      out.resid = (Aw - rho * w).norm();
      v = w;
      break;
    }
    if (std::abs(rho - rho_prev) <= 1e-5 * std::max(1.0, std::abs(rho)) && refactors < 8) {
      SpMat M = shifted(rho);
      lu.factorize(M);
      if (lu.info() != Eigen::Success) throw std::runtime_error("shifted factorization failed");
      ++refactors;
      sigma = rho;
    }
    rho_prev = rho;
    v = w;
    if (it == 400) throw std::runtime_error("eigenvalue iteration did not converge");
  }

  // fix sign, normalize in the quadrature L2
  int imax = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  const double sgn = v[imax] >= 0 ? 1.0 : -1.0;
  out.vec.resize(n);
  for (int i = 0; i < n; ++i) out.vec[i] = sgn * v[i];
  const double nrm = g.norm2(out.vec);
  for (double& x : out.vec) x /= nrm;
  return out;
}

}  // namespace detail

// k lowest Dirichlet eigenpairs of L on the grid; -8 (vec ~ Q^3), ~0 (vec ~ Q'),
// then the continuum edge. Shifts bracket those targets, later ones step upward.
inline std::vector<Eigenpair> smallest_eigenpairs(const Grid& g, int k) {
  if (k < 2) throw std::runtime_error("need at least two eigenpairs");
  detail::SpMat A = detail::dirichlet_matrix(g);
  std::vector<Eigenpair> out;
  std::vector<Vec> found;
  for (int j = 0; j < k; ++j) {
    double sigma;
    if (j == 0) sigma = -8.5;
    else if (j == 1) sigma = -0.3;
    else if (j == 2) sigma = 0.9;
    // past the continuum edge the Dirichlet ladder is dense: step just above
    // the last level and let deflation exclude it
    else sigma = out[j - 1].value + 2e-3;
    Eigenpair e = detail::inverse_iteration(A, g, sigma, found);
    found.push_back(e.vec);
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const Eigenpair& a, const Eigenpair& b) {
    return a.value < b.value;
  });
  return out;
}

}  // namespace gkdv
