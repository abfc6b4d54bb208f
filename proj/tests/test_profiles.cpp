#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gkdvlab/profiles.hpp"

using namespace gkdv;

namespace {

const Profiles& prof() {
  static Profiles P = build_profiles();
  return P;
}

// L2 norm of (L f)' - g on |y| <= 35, the flux-equation residual
double flux_resid(const Profiles& P, char name, const Vec& src) {
  const Grid& g = P.g;
  OperatorL op(g);
  Vec lhs = g.d1(op.apply(P.values(name)));
  Vec diff(g.n, 0.0);
  for (int i = 0; i < g.n; ++i)
    if (std::abs(g.y[i]) <= 35.0) diff[i] = lhs[i] - src[i];
  return g.norm2(diff);
}

}  // namespace

TEST_CASE("resonance corrections and growth offsets match their references") {
  const Profiles& P = prof();
  REQUIRE(P.theta.at('A') == Catch::Approx(-11.828586795868102).margin(1e-6));
  REQUIRE(P.theta.at('B') == Catch::Approx(-12.263772472462447).margin(1e-6));
  REQUIRE(P.theta.at('E') == Catch::Approx(8.562411969068837).margin(1e-6));
  REQUIRE(P.theta.at('F') == Catch::Approx(-15.032702857518231).margin(1e-6));
  REQUIRE(P.a0 == Catch::Approx(-24.0923592684).margin(1e-6));
  REQUIRE(P.a1 == Catch::Approx(24.0923592682).margin(1e-6));
  REQUIRE(P.a2 == Catch::Approx(-6.47029088848).margin(1e-6));
  REQUIRE(P.a3 == Catch::Approx(6.47029088839).margin(1e-6));
  // the pairs (A,B) and (E,F) share one offset magnitude with opposite signs
  REQUIRE(std::abs(P.a0 + P.a1) < 1e-6);
  REQUIRE(std::abs(P.a2 + P.a3) < 1e-6);
}

TEST_CASE("defining equations hold in the interior") {
  const Profiles& P = prof();
  const Grid& g = P.g;
  OperatorL op(g);

  // L Y = Q^4
  Vec rY = op.apply(P.values('Y'));
  Vec dY(g.n, 0.0);
  for (int i = 0; i < g.n; ++i)
    if (std::abs(g.y[i]) <= 35.0) dY[i] = rY[i] - P.Q4[i];
  REQUIRE(g.norm2(dY) < 1e-8);

  // (L P)' = LamQ
  REQUIRE(flux_resid(P, 'P', P.LamQ) < 1e-6);
  for (char name : {'A', 'B', 'E', 'F'})
    REQUIRE(flux_resid(P, name, P.src.at(name)) < 1e-5);

  // L (1 + 5Y) = 1: the resonance direction used to cancel left offsets
  Vec one5Y(g.n);
  for (int i = 0; i < g.n; ++i) one5Y[i] = 1.0 + 5.0 * P.values('Y')[i];
  Vec r = op.apply(one5Y);
  Vec d(g.n, 0.0);
  for (int i = 0; i < g.n; ++i)
    if (std::abs(g.y[i]) <= 35.0) d[i] = r[i] - 1.0;
  REQUIRE(g.norm2(d) < 1e-6);
}

TEST_CASE("projections on Q take their closed-form values") {
  const Profiles& P = prof();
  const Grid& g = P.g;
  const double m0 = constants().m0;
  REQUIRE(g.inner(P.values('Y'), P.Q) == Catch::Approx(-0.6 * m0).margin(1e-8));
  REQUIRE(g.inner(P.values('P'), P.Q) == Catch::Approx(m0 * m0).margin(1e-8));
  REQUIRE(g.inner(P.values('X'), P.Q) == Catch::Approx(-m0 * m0).margin(1e-8));
  REQUIRE(g.inner(P.values('Z'), P.Q) == Catch::Approx(0.8 * m0).margin(1e-8));
  REQUIRE(g.inner(P.values('W'), P.Q) == Catch::Approx(0.2 * m0).margin(1e-8));
}

TEST_CASE("all profiles are orthogonal to the kernel") {
  const Profiles& P = prof();
  const Grid& g = P.g;
  for (char name : {'Y', 'P', 'X', 'A', 'B', 'E', 'F'})
    REQUIRE(std::abs(g.inner(P.values(name), P.Qp)) < 1e-9);
}

TEST_CASE("flux sources satisfy the solvability identity (g, Q) = 0") {
  const Profiles& P = prof();
  for (char name : {'A', 'B', 'E', 'F'}) {
    REQUIRE(std::abs(P.compat.at(name)) < 1e-6);
    REQUIRE(std::abs(P.mult.at(name)) < 1e-6);
  }
}

TEST_CASE("P tends to 2 m0 on the left and X mirrors it") {
  const Profiles& P = prof();
  const Grid& g = P.g;
  const double m0 = constants().m0;
  const LineFit& lf = P.fit_left.at('P');
  REQUIRE(std::abs(lf.slope) < 1e-9);
  REQUIRE(lf.offset == Catch::Approx(2.0 * m0).margin(1e-8));

  // X(y) = -P(-y): exact reflection identity of the construction
  const Vec& X = P.values('X');
  const Vec& Pv = P.values('P');
  double worst = 0.0;
  for (int i = 0; i < g.n; ++i)
    worst = std::max(worst, std::abs(X[i] + Pv[g.n - 1 - i]));
  REQUIRE(worst < 1e-6);

  // plateau at +inf
  REQUIRE(std::abs(X[g.n - 1] + 2.0 * m0) < 1e-9);
}

TEST_CASE("growth slopes on the right take their closed-form values") {
  const Profiles& P = prof();
  const double m0 = constants().m0, al = constants().alpha;
  REQUIRE(std::abs(P.fit_right.at('A').slope - 2.0 * al * m0) < 1e-5 * 2.0 * al * m0);
  REQUIRE(std::abs(P.fit_right.at('B').slope + 2.0 * al * m0) < 1e-5 * 2.0 * al * m0);
  REQUIRE(std::abs(P.fit_right.at('E').slope - 3.0 * m0) < 1e-5 * 3.0 * m0);
  REQUIRE(std::abs(P.fit_right.at('F').slope + 3.0 * m0) < 1e-5 * 3.0 * m0);
}

TEST_CASE("left tails decay like (1 + |y|)^5 e^y with small constants") {
  const Profiles& P = prof();
  const Grid& g = P.g;
  const double pinned[4] = {0.947, 0.962, 2.251, 2.275};
  int idx = 0;
  for (char name : {'A', 'B', 'E', 'F'}) {
    const Vec& f = P.values(name);
    double c = 0.0;
    for (int i = 0; i < g.n; ++i) {
      if (g.y[i] < -35.0 || g.y[i] > -5.0) continue;
      c = std::max(c, std::abs(f[i]) * std::exp(std::abs(g.y[i])) / std::pow(1.0 + std::abs(g.y[i]), 5));
    }
    INFO("left decay constant of " << name << ": " << c);
    REQUIRE(c < 5.0);
    REQUIRE(c == Catch::Approx(pinned[idx]).margin(0.05));
    ++idx;
  }
}

TEST_CASE("X carries the quadratic-in-y exponential tail") {
  const Profiles& P = prof();
  const Grid& g = P.g;
  const double m0 = constants().m0, cQ = constants().c_Q;
  const Vec& X = P.values('X');

  // |X - step - model| / ((1+|y|) e^{-|y|}) stays bounded on both sides
  double supL = 0.0, supR = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double y = g.y[i];
    if (std::abs(y) > 30.0) continue;
    const double step = (y >= 0.0) ? -2.0 * m0 : 0.0;
    const double model = -(cQ / 4.0) * y * y * std::exp(-std::abs(y));
    const double ratio = std::abs(X[i] - step - model) / ((1.0 + std::abs(y)) * std::exp(-std::abs(y)));
    (y <= 0.0 ? supL : supR) = std::max(y <= 0.0 ? supL : supR, ratio);
  }
  INFO("sup ratios: left " << supL << " right " << supR);
  REQUIRE(supL < 100.0);
  REQUIRE(supR < 100.0);

  // quadratic fit of X e^{-y} on [-25, -15] recovers the amplitude c_Q / 4
  Vec zs, fs;
  for (int i = 0; i < g.n; ++i) {
    if (g.y[i] < -25.0 || g.y[i] > -15.0) continue;
    zs.push_back(g.y[i]);
    fs.push_back(X[i] * std::exp(-g.y[i]));
  }
  QuadFit q = fit_quad(zs, fs);
  INFO("fitted tail amplitude: " << -q.c2 << " vs " << cQ / 4.0);
  REQUIRE(std::abs(-q.c2 - cQ / 4.0) < 0.05 * (cQ / 4.0));
}

TEST_CASE("evaluators extend profiles linearly beyond the grid") {
  const Profiles& P = prof();
  const double m0 = constants().m0, al = constants().alpha;
  auto A0 = P.fn('A', 0);
  REQUIRE(A0(45.0) == Catch::Approx(2.0 * al * m0 * 45.0 + P.a0).margin(1e-12));
  REQUIRE(A0(-45.0) == 0.0);
  auto A1 = P.fn('A', 1);
  REQUIRE(A1(45.0) == Catch::Approx(2.0 * al * m0).margin(1e-12));
  auto X0 = P.fn('X', 0);
  REQUIRE(X0(45.0) == Catch::Approx(-2.0 * m0).margin(1e-12));
  REQUIRE(X0(-45.0) == 0.0);
  auto P0 = P.fn('P', 0);
  REQUIRE(P0(-45.0) == Catch::Approx(2.0 * m0).margin(1e-12));
  // interior evaluation agrees with the table at the nodes
  REQUIRE(A0(P.g.y[6000]) == Catch::Approx(P.values('A')[6000]).margin(1e-12));
}
