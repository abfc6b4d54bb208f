#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gkdvlab/linop.hpp"

using namespace gkdv;

namespace {

const Grid& big_grid() {
  static Grid g(40.0, 12001);
  return g;
}

OperatorL& op() {
  static OperatorL L(big_grid());
  return L;
}

// random smooth decaying field: a few modulated Gaussian bumps
Vec random_bump_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec f(g.n, 0.0);
  const int nb = 2 + static_cast<int>(uni(rng) * 3);
  for (int b = 0; b < nb; ++b) {
    const double amp = 2.0 * uni(rng) - 1.0;
    const double c = 16.0 * uni(rng) - 8.0;
    const double s = 0.6 + 2.0 * uni(rng);
    const double om = 3.0 * uni(rng);
    const double ph = 6.283185307179586 * uni(rng);
    for (int i = 0; i < g.n; ++i) {
      const double u = (g.y[i] - c) / s;
      f[i] += amp * std::exp(-0.5 * u * u) * std::cos(om * g.y[i] + ph);
    }
  }
  return f;
}

void project_out(const Grid& g, Vec& f, const Vec& dir) {
  const double c = g.inner(f, dir) / g.inner(dir, dir);
  for (int i = 0; i < g.n; ++i) f[i] -= c * dir[i];
}

}  // namespace

TEST_CASE("L annihilates Q' and maps the scaling directions correctly") {
  const Grid& g = big_grid();
  Vec Q = ground_vec(g.y), Qp = ground_vec(g.y, 1);
  Vec LQp = op().apply(Qp);
  REQUIRE(g.norm2(LQp) < 1e-7);

  // L LamQ = -2Q
  Vec LamQ = lam_analytic(g.y, Q, Qp);
  Vec r1 = op().apply(LamQ);
  for (int i = 0; i < g.n; ++i) r1[i] += 2.0 * Q[i];
  REQUIRE(g.norm2(r1) < 1e-6);

  // L Q^3 = -8 Q^3
  Vec Q3(g.n);
  for (int i = 0; i < g.n; ++i) Q3[i] = Q[i] * Q[i] * Q[i];
  Vec r2 = op().apply(Q3);
  for (int i = 0; i < g.n; ++i) r2[i] += 8.0 * Q3[i];
  REQUIRE(g.norm2(r2) < 1e-6);
}

TEST_CASE("L is self-adjoint against the quadrature") {
  const Grid& g = big_grid();
  std::mt19937_64 rng(7);
  Vec f = random_bump_field(g, rng), q = random_bump_field(g, rng);
  const double lhs = g.inner(op().apply(f), q);
  const double rhs = g.inner(f, op().apply(q));
  REQUIRE(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("lowest Dirichlet eigenpairs: -8 with Q^3, kernel, continuum edge") {
  const Grid& g = big_grid();
  auto pairs = smallest_eigenpairs(g, 3);
  REQUIRE(pairs.size() == 3);
  REQUIRE(std::abs(pairs[0].value + 8.0) < 1e-5);
  REQUIRE(std::abs(pairs[1].value) < 1e-6);
  REQUIRE(pairs[2].value > 0.1);
  // the kernel level sits at zero up to discretization, count it as zero
  int negatives = 0;
  for (const auto& p : pairs) negatives += (p.value < -1e-4);
  REQUIRE(negatives == 1);

  // ground eigenvector is Q^3 up to normalization
  Vec Q = ground_vec(g.y), Q3(g.n);
  for (int i = 0; i < g.n; ++i) Q3[i] = Q[i] * Q[i] * Q[i];
  const double cosang = std::abs(g.inner(pairs[0].vec, Q3)) / (g.norm2(pairs[0].vec) * g.norm2(Q3));
  REQUIRE(std::acos(std::min(1.0, cosang)) < 1e-4);

  // kernel eigenvector is Q'
  Vec Qp = ground_vec(g.y, 1);
  const double cosk = std::abs(g.inner(pairs[1].vec, Qp)) / g.norm2(Qp);
  REQUIRE(std::acos(std::min(1.0, cosk)) < 1e-4);
}

TEST_CASE("bordered solve inverts L on the orthogonal complement of the kernel") {
  const Grid& g = big_grid();
  std::mt19937_64 rng(13);
  Vec target = random_bump_field(g, rng);
  project_out(g, target, ground_vec(g.y, 1));
  Vec rhs = op().apply(target);
  auto [f, mult] = op().solve(rhs);
  Vec diff(g.n);
  for (int i = 0; i < g.n; ++i) diff[i] = f[i] - target[i];
  REQUIRE(g.norm2(diff) / g.norm2(target) < 1e-8);
  REQUIRE(std::abs(mult) < 1e-8);
  // the solve pins the kernel component of the solution
  REQUIRE(std::abs(g.inner(f, ground_vec(g.y, 1))) < 1e-12 * std::max(1.0, g.norm2(f)));
}

TEST_CASE("bordered solve rejects sources with a kernel component") {
  REQUIRE_THROWS_WITH(op().solve(ground_vec(big_grid().y, 1)),
                      "source not orthogonal to kernel");
}

TEST_CASE("solve is deterministic and unique") {
  const Grid& g = big_grid();
  std::mt19937_64 rng(29);
  Vec rhs = random_bump_field(g, rng);
  project_out(g, rhs, ground_vec(g.y, 1));
  auto [f1, m1] = op().solve(rhs);
  auto [f2, m2] = op().solve(rhs);
  double worst = 0.0;
  for (int i = 0; i < g.n; ++i) worst = std::max(worst, std::abs(f1[i] - f2[i]));
  REQUIRE(worst == 0.0);
  REQUIRE(m1 == m2);
}

TEST_CASE("flux solve gives (L f)' = g for the scaling source") {
  const Grid& g = big_grid();
  Vec Q = ground_vec(g.y), Qp = ground_vec(g.y, 1);
  Vec LamQ = lam_analytic(g.y, Q, Qp);
  Vec dLamQ(g.n);
  for (int i = 0; i < g.n; ++i)
    dLamQ[i] = 1.5 * Qp[i] + g.y[i] * ground_d(g.y[i], 2);
  // antiderivative vanishing at +inf
  Vec Ghat = g.cum_from_right(LamQ);
  for (double& v : Ghat) v = -v;
  FluxSolution s = op().solve_flux(LamQ, dLamQ, Ghat);
  Vec lhs = g.d1(op().apply(s.f));
  double worst = 0.0;
  for (int i = 0; i < g.n; ++i) {
    if (std::abs(g.y[i]) > 35.0) continue;
    worst = std::max(worst, std::abs(lhs[i] - LamQ[i]));
  }
  REQUIRE(worst < 1e-5);
  REQUIRE(std::abs(s.compat) < 1e-9);  // (LamQ, Q) = 0
  REQUIRE(std::abs(s.mult) < 1e-8);
}

TEST_CASE("quadratic form is coercive under the three-direction orthogonality") {
  const Grid& g = big_grid();
  Vec Q = ground_vec(g.y), Qp = ground_vec(g.y, 1);
  Vec LamQ = lam_analytic(g.y, Q, Qp);
  std::mt19937_64 rng(0xc0e5);
  double worst = 1e300;
  for (int t = 0; t < 100; ++t) {
    Vec f = random_bump_field(g, rng);
    project_out(g, f, Q);
    project_out(g, f, Qp);
    project_out(g, f, LamQ);
    const double quad = g.inner(op().apply(f), f);
    Vec fp = g.d1(f);
    const double h1 = g.inner(f, f) + g.inner(fp, fp);
    worst = std::min(worst, quad / h1);
  }
  INFO("min (Lf,f)/||f||_H1^2 over samples: " << worst);
  REQUIRE(worst > 0.05);
}

TEST_CASE("quadratic form dominates the mass away from the explicit directions") {
  const Grid& g = big_grid();
  Vec Q = ground_vec(g.y), Qp = ground_vec(g.y, 1);
  Vec Q3(g.n);
  for (int i = 0; i < g.n; ++i) Q3[i] = Q[i] * Q[i] * Q[i];
  std::mt19937_64 rng(0xbea7);
  double worst = 1e300;
  for (int t = 0; t < 100; ++t) {
    Vec f = random_bump_field(g, rng);
    project_out(g, f, Qp);
    project_out(g, f, Q3);
    const double quad = g.inner(op().apply(f), f);
    worst = std::min(worst, quad / g.inner(f, f));
  }
  INFO("min (Lf,f)/||f||^2 over samples: " << worst);
  REQUIRE(worst >= 1.0 - 1e-9);
}
