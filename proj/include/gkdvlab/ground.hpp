#pragma once
// Ground state Q(y) = (3 sech^2(2y))^{1/4} of Q'' - Q + Q^5 = 0, its closed-form
// derivatives, the exact constants built from it, and the L^2-critical rescaling.

#include <cmath>
#include <stdexcept>

#include "gkdvlab/grid.hpp"

namespace gkdv {

inline double ground(double y) {
  return std::pow(3.0, 0.25) * std::pow(std::cosh(2.0 * y), -0.5);
}

// k-th derivative via Q'' = Q - Q^5 and Q' = -Q tanh(2y)
inline double ground_d(double y, int k) {
  const double Q = ground(y);
  switch (k) {
    case 0: return Q;
    case 1: return -Q * std::tanh(2.0 * y);
    case 2: return Q - Q * Q * Q * Q * Q;
    case 3: {
      const double Q4 = Q * Q * Q * Q;
      return -Q * std::tanh(2.0 * y) * (1.0 - 5.0 * Q4);
    }
    default: throw std::runtime_error("ground-state derivative order must be 0..3");
  }
}

inline Vec ground_vec(const Vec& y, int k = 0) {
  Vec out(y.size());
  for (size_t i = 0; i < y.size(); ++i) out[i] = ground_d(y[i], k);
  return out;
}

struct Constants {
  double int_Q;    // int Q = 3^{1/4} sqrt(pi) Gamma(1/4) / (2 Gamma(3/4))
  double m0;       // int Q / 4
  double c_Q;      // 12^{1/4}, tail amplitude: Q ~ c_Q e^{-|y|}
  double alpha;    // 4 sqrt(3) / m0^2
  double mass_Q;   // int Q^2 = sqrt(3) pi / 2
  double grad_Q;   // int Q'^2 = sqrt(3) pi / 4
};

inline const Constants& constants() {
  static const Constants c = [] {
    Constants k{};
    const double pi = std::acos(-1.0);
    k.int_Q = std::pow(3.0, 0.25) * std::sqrt(pi) * std::tgamma(0.25) / (2.0 * std::tgamma(0.75));
    k.m0 = k.int_Q / 4.0;
    k.c_Q = std::pow(12.0, 0.25);
    k.alpha = 4.0 * std::sqrt(3.0) / (k.m0 * k.m0);
    k.mass_Q = std::sqrt(3.0) * pi / 2.0;
    k.grad_Q = std::sqrt(3.0) * pi / 4.0;
    return k;
  }();
  return c;
}

// scaling generator: (Lam f)(y) = f/2 + y f'
inline Vec lam_of(const Grid& g, const Vec& f) {
  Vec fp = g.d1(f), out(f.size());
  for (int i = 0; i < g.n; ++i) out[i] = 0.5 * f[i] + g.y[i] * fp[i];
  return out;
}

inline Vec lam_analytic(const Vec& y, const Vec& f, const Vec& fp) {
  Vec out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = 0.5 * f[i] + y[i] * fp[i];
  return out;
}

// f_mu(y) = (1+mu)^{1/4} f(sqrt(1+mu) y), mass preserving; zero extension
inline Vec rescale(const Grid& g, const Vec& f, double mu) {
  if (mu <= -1.0) throw std::runtime_error("invalid scaling");
  const double nu = std::sqrt(1.0 + mu);
  const double amp = std::pow(1.0 + mu, 0.25);
  Vec out(g.n);
  for (int i = 0; i < g.n; ++i) out[i] = amp * lagrange_point<6>(g, f, nu * g.y[i]);
  return out;
}

inline double mass_of(const Grid& g, const Vec& f) { return g.inner(f, f); }

// E(u) = int (u'^2 / 2 - u^6 / 6); E(Q) = 0
inline double energy_of(const Grid& g, const Vec& f) {
  Vec fp = g.d1(f);
  Vec integ(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double u = f[i], u2 = u * u;
    integ[i] = 0.5 * fp[i] * fp[i] - u2 * u2 * u2 / 6.0;
  }
  return g.integrate(integ);
}

}  // namespace gkdv
