#pragma once
// The six correction profiles of the two-bubble ansatz. Y solves L Y = Q^4;
// P, A, B, E, F solve flux equations (L f)' = g for sources assembled from Q,
// X = P - 2 m0 (1 + 5Y), and each other. Sources with a nonzero (g, Q) force
// linear growth at +inf; the left offset is removed with the resonance
// direction 1 + 5Y, which L maps to the constant 1.

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gkdvlab/linop.hpp"

namespace gkdv {

// values on the grid with linear extensions outside it
struct ProfileFn {
  const Grid* g = nullptr;
  const Vec* v = nullptr;
  std::array<double, 2> extl{0.0, 0.0}, extr{0.0, 0.0};

  double operator()(double x) const { return lagrange_point<6>(*g, *v, x, extl, extr); }

  void eval(const Vec& xq, Vec& out) const {
    out.resize(xq.size());
    for (size_t i = 0; i < xq.size(); ++i) out[i] = (*this)(xq[i]);
  }
};

struct Profiles {
  Grid g;
  Vec Q, Qp, Q4, LamQ, dLamQ;
  std::map<char, std::array<Vec, 4>> tab;  // profile and first three derivatives
  std::map<char, Vec> src;                 // flux sources of A, B, E, F
  std::map<char, LineFit> fit_left, fit_right;
  std::map<char, double> theta;            // resonance corrections
  std::map<char, double> compat;           // (g, Q) per flux solve
  std::map<char, double> mult;             // kernel multipliers
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;   // right offsets of A, -B, E, -F

  const Vec& values(char name, int k = 0) const { return tab.at(name)[k]; }

  ProfileFn fn(char name, int k) const {
    const double m0 = constants().m0, al = constants().alpha;
    std::array<double, 2> el{0.0, 0.0}, er{0.0, 0.0};
    if (k == 0) {
      switch (name) {
        case 'P': el = {0.0, 2.0 * m0}; break;
        case 'X': er = {0.0, -2.0 * m0}; break;
        case 'A': er = {2.0 * al * m0, a0}; break;
        case 'B': er = {-2.0 * al * m0, -a1}; break;
        case 'E': er = {3.0 * m0, a2}; break;
        case 'F': er = {-3.0 * m0, -a3}; break;
        default: break;
      }
    } else if (k == 1) {
      switch (name) {
        case 'A': er = {0.0, 2.0 * al * m0}; break;
        case 'B': er = {0.0, -2.0 * al * m0}; break;
        case 'E': er = {0.0, 3.0 * m0}; break;
        case 'F': er = {0.0, -3.0 * m0}; break;
        default: break;
      }
    }
    return ProfileFn{&g, &tab.at(name)[k], el, er};
  }
};

inline Profiles build_profiles(double L = 40.0, int n = 12001) {
  Profiles P;
  P.g = Grid(L, n);
  const Grid& g = P.g;
  OperatorL op(g);
  const double m0 = constants().m0, cQ = constants().c_Q, al = constants().alpha;

  Vec& Q = P.Q;
  Vec& Qp = P.Qp;
  Q = ground_vec(g.y);
  Qp = ground_vec(g.y, 1);
  Vec Qpp = ground_vec(g.y, 2);
  Vec& Q4 = P.Q4;
  Q4.resize(n);
  Vec Q3(n), Q2(n);
  for (int i = 0; i < n; ++i) {
    Q2[i] = Q[i] * Q[i];
    Q3[i] = Q2[i] * Q[i];
    Q4[i] = Q2[i] * Q2[i];
  }
  P.LamQ = lam_analytic(g.y, Q, Qp);
  P.dLamQ.resize(n);
  for (int i = 0; i < n; ++i) P.dLamQ[i] = 1.5 * Qp[i] + g.y[i] * Qpp[i];

  Vec fac(n), cross(n);
  for (int i = 0; i < n; ++i) {
    fac[i] = 1.0 - 5.0 * Q4[i];
    cross[i] = 20.0 * Q3[i] * Qp[i];
  }

  // Y: L Y = Q^4, decays on both sides
  auto [Y, multY] = op.solve(Q4);
  P.mult['Y'] = multY;
  Vec Yp = g.d1(Y);
  Vec Ypp(n), Yppp(n);
  for (int i = 0; i < n; ++i) Ypp[i] = Y[i] * fac[i] - Q4[i];
  for (int i = 0; i < n; ++i) Yppp[i] = Yp[i] * fac[i] - cross[i] * Y[i] - 4.0 * Q3[i] * Qp[i];
  P.tab['Y'] = {Y, Yp, Ypp, Yppp};

  // Z = Q^4 + 4 y Q^3 Q' = (y Q^4)', W = Y + Z
  Vec Z(n), Zp(n), W(n), Wp(n);
  for (int i = 0; i < n; ++i) {
    Z[i] = Q4[i] + 4.0 * g.y[i] * Q3[i] * Qp[i];
    Zp[i] = 8.0 * Q3[i] * Qp[i] + 4.0 * g.y[i] * Q2[i] * (3.0 * Qp[i] * Qp[i] + Q[i] * Qpp[i]);
    W[i] = Y[i] + Z[i];
    Wp[i] = Yp[i] + Zp[i];
  }
  P.tab['Z'] = {Z, Zp, g.d2(Z), g.d3(Z)};
  P.tab['W'] = {W, Wp, g.d2(W), g.d3(W)};

  // P: (L P)' = LamQ, P(-inf) = 2 m0, decays at +inf
  Vec Gr = g.cum_from_right(P.LamQ);
  Vec qP(n);
  for (int i = 0; i < n; ++i) qP[i] = P.dLamQ[i] - 5.0 * Q4[i] * Gr[i];
  auto [hP, multP] = op.solve(qP);
  P.mult['P'] = multP;
  Vec Pv(n), Pp = g.d1(hP), Ppp(n), Pppp(n);
  for (int i = 0; i < n; ++i) {
    Pv[i] = hP[i] - Gr[i];
    Pp[i] += P.LamQ[i];
    Ppp[i] = hP[i] * fac[i] - qP[i] + P.dLamQ[i];
  }
  for (int i = 0; i < n; ++i) Pppp[i] = Pp[i] * fac[i] - cross[i] * Pv[i] - P.LamQ[i];
  P.tab['P'] = {Pv, Pp, Ppp, Pppp};
  P.fit_left['P'] = fit_line(g.y, Pv, -L + 4.0, -L + 12.0);

  // X = P - 2 m0 (1 + 5Y): X(-inf) = 0, X(+inf) = -2 m0
  Vec X(n), Xp(n), Xpp(n), Xppp(n);
  for (int i = 0; i < n; ++i) {
    X[i] = Pv[i] - 2.0 * m0 * (1.0 + 5.0 * Y[i]);
    Xp[i] = Pp[i] - 10.0 * m0 * Yp[i];
    Xpp[i] = Ppp[i] - 10.0 * m0 * Ypp[i];
    Xppp[i] = Pppp[i] - 10.0 * m0 * Yppp[i];
  }
  P.tab['X'] = {X, Xp, Xpp, Xppp};

  // exponentially weighted sources and their derivatives, all closed form
  Vec eyQ4(n), deyQ4(n), d2eyQ4(n), demyQ4(n), d2emyQ4(n);
  for (int i = 0; i < n; ++i) {
    const double ey = std::exp(g.y[i]), emy = std::exp(-g.y[i]);
    const double qp2 = Qp[i] * Qp[i];
    eyQ4[i] = ey * Q4[i];
    deyQ4[i] = ey * Q3[i] * (Q[i] + 4.0 * Qp[i]);
    d2eyQ4[i] = ey * (Q4[i] + 8.0 * Q3[i] * Qp[i] + 12.0 * Q2[i] * qp2 + 4.0 * Q3[i] * Qpp[i]);
    demyQ4[i] = emy * Q3[i] * (4.0 * Qp[i] - Q[i]);
    d2emyQ4[i] = emy * (Q4[i] - 8.0 * Q3[i] * Qp[i] + 12.0 * Q2[i] * qp2 + 4.0 * Q3[i] * Qpp[i]);
  }

  // scaling actions and nonlinear combinations entering E and F
  Vec LamX(n), dLamX(n), LamY(n), dX2Q3(n), d2X2Q3(n), dP2Q3(n), d2P2Q3(n);
  for (int i = 0; i < n; ++i) {
    LamX[i] = 0.5 * X[i] + g.y[i] * Xp[i];
    dLamX[i] = 1.5 * Xp[i] + g.y[i] * Xpp[i];
    LamY[i] = 0.5 * Y[i] + g.y[i] * Yp[i];
    dX2Q3[i] = 2.0 * X[i] * Xp[i] * Q3[i] + 3.0 * X[i] * X[i] * Q2[i] * Qp[i];
    d2X2Q3[i] = 2.0 * Q3[i] * (Xp[i] * Xp[i] + X[i] * Xpp[i]) + 12.0 * Q2[i] * Qp[i] * X[i] * Xp[i]
                + 6.0 * X[i] * X[i] * Q[i] * Qp[i] * Qp[i] + 3.0 * X[i] * X[i] * Q2[i] * Qpp[i];
    dP2Q3[i] = 2.0 * Pv[i] * Pp[i] * Q3[i] + 3.0 * Pv[i] * Pv[i] * Q2[i] * Qp[i];
    d2P2Q3[i] = 2.0 * Q3[i] * (Pp[i] * Pp[i] + Pv[i] * Ppp[i]) + 12.0 * Q2[i] * Qp[i] * Pv[i] * Pp[i]
                + 6.0 * Pv[i] * Pv[i] * Q[i] * Qp[i] * Qp[i] + 3.0 * Pv[i] * Pv[i] * Q2[i] * Qpp[i];
  }

  struct Source {
    Vec val, der;
  };
  std::map<char, Source> sources;
  sources['A'] = Source{Vec(n), Vec(n)};
  sources['B'] = Source{Vec(n), Vec(n)};
  sources['E'] = Source{Vec(n), Vec(n)};
  sources['F'] = Source{Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    sources['A'].val[i] = -5.0 * cQ * deyQ4[i] - al * X[i];
    sources['A'].der[i] = -5.0 * cQ * d2eyQ4[i] - al * Xp[i];
    sources['B'].val[i] = 5.0 * cQ * demyQ4[i] + al * X[i] + 10.0 * al * m0 * W[i];
    sources['B'].der[i] = 5.0 * cQ * d2emyQ4[i] + al * Xp[i] + 10.0 * al * m0 * Wp[i];
    sources['E'].val[i] = LamX[i] - 2.0 * X[i] + 10.0 * dX2Q3[i];
    sources['E'].der[i] = dLamX[i] - 2.0 * Xp[i] + 10.0 * d2X2Q3[i];
    sources['F'].val[i] = 2.0 * X[i] - LamX[i] + 10.0 * m0 * (2.0 * Y[i] - LamY[i])
                          - 10.0 * dP2Q3[i] + 15.0 * m0 * Z[i];
    sources['F'].der[i] = 2.0 * Xp[i] - dLamX[i] + 10.0 * m0 * (0.5 * Yp[i] - g.y[i] * Ypp[i])
                          - 10.0 * d2P2Q3[i] + 15.0 * m0 * Zp[i];
  }

  Vec one5Y(n);
  for (int i = 0; i < n; ++i) one5Y[i] = 1.0 + 5.0 * Y[i];

  for (char name : {'A', 'B', 'E', 'F'}) {
    const Source& s = sources.at(name);
    P.src[name] = s.val;
    Vec G0 = g.cum_from_zero(s.val);
    Vec q1(n);
    for (int i = 0; i < n; ++i) q1[i] = s.der[i] + 5.0 * Q4[i] * G0[i];
    auto [h1, mu] = op.solve(q1);
    P.mult[name] = mu;
    P.compat[name] = g.inner(s.val, Q);
    Vec raw(n);
    for (int i = 0; i < n; ++i) raw[i] = h1[i] + G0[i];
    LineFit lf0 = fit_line(g.y, raw, -L + 4.0, -L + 12.0);
    const double th = -lf0.offset;
    P.theta[name] = th;
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = raw[i] + th * one5Y[i];
    LineFit fl = fit_line(g.y, f, -L + 4.0, -L + 12.0);
    LineFit fr = fit_line(g.y, f, L - 12.0, L - 4.0);
    if (fr.resid > 1e-4 * std::max({1.0, std::abs(fr.slope), std::abs(fr.offset)}))
      throw std::runtime_error("asymptotics not resolved");
    P.fit_left[name] = fl;
    P.fit_right[name] = fr;
    Vec fp = g.d1(f), fpp = g.d2(f), fppp(n);
    for (int i = 0; i < n; ++i) fppp[i] = fp[i] * fac[i] - cross[i] * f[i] - s.val[i];
    P.tab[name] = {std::move(f), std::move(fp), std::move(fpp), std::move(fppp)};
  }

  P.a0 = P.fit_right['A'].offset;
  P.a1 = -P.fit_right['B'].offset;
  P.a2 = P.fit_right['E'].offset;
  P.a3 = -P.fit_right['F'].offset;
  return P;
}

}  // namespace gkdv
