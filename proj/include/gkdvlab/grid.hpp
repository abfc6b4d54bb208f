#pragma once
// Uniform line grid with composite-Simpson quadrature, sliding-stencil finite
// differences (order 6 interior accuracy), and a quintic cumulative integral.

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "gkdvlab/util.hpp"

namespace gkdv {

// Fornberg weights for derivatives 0..m at x0 from nodes xs; returns (m+1) rows.
inline std::vector<Vec> fornberg(double x0, const Vec& xs, int m) {
  const int n = static_cast<int>(xs.size());
  std::vector<Vec> C(n, Vec(m + 1, 0.0));
  double c1 = 1.0, c4 = xs[0] - x0;
  C[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    double c2 = 1.0, c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = std::min(i, m); k >= 1; --k)
          C[i][k] = c1 * (k * C[i - 1][k - 1] - c5 * C[i - 1][k]) / c2;
        C[i][0] = -c1 * c5 * C[i - 1][0] / c2;
      }
      for (int k = std::min(i, m); k >= 1; --k)
        C[j][k] = (c4 * C[j][k] - k * C[j][k - 1]) / c3;
      C[j][0] = c4 * C[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<Vec> out(m + 1, Vec(n));
  for (int d = 0; d <= m; ++d)
    for (int j = 0; j < n; ++j) out[d][j] = C[j][d];
  return out;
}

class Grid {
 public:
  double lo = 0, hi = 0, h = 0;
  int n = 0;
  Vec y, w;  // nodes and composite-Simpson weights

  Grid() = default;

  // symmetric [-L, L]; midpoint lands on y = 0 exactly
  Grid(double L, int npts) { init(-L, L, npts, true); }

  Grid(double lo_, double hi_, int npts) { init(lo_, hi_, npts, false); }

  double integrate(const Vec& f) const {
    check(f);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f[i];
    return s;
  }

  double inner(const Vec& f, const Vec& g) const {
    check(f);
    check(g);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f[i] * g[i];
    return s;
  }

  double norm2(const Vec& f) const { return std::sqrt(inner(f, f)); }

  double norm_h1(const Vec& f) const {
    Vec fp = d(f, 1);
    return std::sqrt(inner(f, f) + inner(fp, fp));
  }

  // k-th derivative, sliding Fornberg stencils (7 points for k<=2, 9 for k=3)
  Vec d(const Vec& f, int k) const {
    check(f);
    if (k < 1 || k > 3) throw std::runtime_error("derivative order must be 1..3");
    const auto& st = stencil(k);
    const int pts = static_cast<int>(st[0].size());
    const int half = pts / 2;
    Vec out(n);
    for (int i = 0; i < n; ++i) {
      int b = i - half;
      if (b < 0) b = 0;
      if (b > n - pts) b = n - pts;
      const Vec& row = st[i - b];
      double s = 0.0;
      for (int j = 0; j < pts; ++j) s += row[j] * f[b + j];
      out[i] = s;
    }
    return out;
  }

  Vec d1(const Vec& f) const { return d(f, 1); }
  Vec d2(const Vec& f) const { return d(f, 2); }
  Vec d3(const Vec& f) const { return d(f, 3); }

  // C[i] = int_{y_0}^{y_i} f, quintic interpolation per interval
  Vec cumint(const Vec& f) const {
    check(f);
    if (n < 6) throw std::runtime_error("cumulative integral needs at least six nodes");
    static const auto tab = quintic_interval_weights();
    Vec c(n, 0.0);
    for (int i = 0; i < n - 1; ++i) {
      int b = i - 2;
      if (b < 0) b = 0;
      if (b > n - 6) b = n - 6;
      const auto& row = tab[i - b];
      double s = 0.0;
      for (int j = 0; j < 6; ++j) s += row[j] * f[b + j];
      c[i + 1] = c[i] + h * s;
    }
    return c;
  }

  Vec cum_from_right(const Vec& f) const {  // int_{y}^{y_max} f
    Vec c = cumint(f);
    const double tot = c[n - 1];
    for (double& v : c) v = tot - v;
    return c;
  }

  Vec cum_from_zero(const Vec& f) const {  // int_0^y f, grid must contain y = 0
    Vec c = cumint(f);
    const int i0 = zero_index();
    const double c0 = c[i0];
    for (double& v : c) v -= c0;
    return c;
  }

  int zero_index() const {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(y[i]) < std::abs(y[best])) best = i;
    if (std::abs(y[best]) > 1e-12) throw std::runtime_error("grid does not contain y = 0");
    return best;
  }

 private:
  void init(double lo_, double hi_, int npts, bool symmetric) {
    if (npts < 9 || npts % 2 == 0)
      throw std::runtime_error("grid needs an odd node count of at least 9");
    lo = lo_;
    hi = hi_;
    n = npts;
    h = (hi - lo) / (n - 1);
    y.resize(n);
    if (symmetric) {
      const int mid = (n - 1) / 2;
      for (int i = 0; i < n; ++i) y[i] = (i - mid) * h;
    } else {
      for (int i = 0; i < n; ++i) y[i] = lo + i * h;
    }
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) w[i] = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    for (double& v : w) v *= h / 3.0;
  }

  void check(const Vec& f) const {
    if (static_cast<int>(f.size()) != n) throw std::runtime_error("field length does not match grid");
  }

  const std::vector<Vec>& stencil(int k) const {
    auto it = stencils_.find(k);
    if (it != stencils_.end()) return it->second;
    const int pts = (k == 3) ? 9 : 7;
    if (n < pts) throw std::runtime_error("grid too small for derivative stencil");
    Vec nodes(pts);
    for (int j = 0; j < pts; ++j) nodes[j] = j;
    std::vector<Vec> rows(pts);
    const double scale = std::pow(h, -k);
    for (int off = 0; off < pts; ++off) {
      rows[off] = fornberg(static_cast<double>(off), nodes, k)[k];
      for (double& v : rows[off]) v *= scale;
    }
    return stencils_.emplace(k, std::move(rows)).first->second;
  }

  // tab[p][j] = int_p^{p+1} l_j(u) du, quintic Lagrange basis on nodes 0..5;
  // 3-point Gauss is exact at this degree
  static std::array<std::array<double, 6>, 5> quintic_interval_weights() {
    std::array<std::array<double, 6>, 5> tab{};
    const double g = std::sqrt(3.0 / 5.0);
    const double gx[3] = {-g, 0.0, g};
    const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    for (int p = 0; p < 5; ++p)
      for (int j = 0; j < 6; ++j) {
        double s = 0.0;
        for (int q = 0; q < 3; ++q) {
          const double u = p + 0.5 + 0.5 * gx[q];
          double l = 1.0;
          for (int k = 0; k < 6; ++k)
            if (k != j) l *= (u - k) / (j - k);
          s += 0.5 * gw[q] * l;
        }
        tab[p][j] = s;
      }
    return tab;
  }

  mutable std::map<int, std::vector<Vec>> stencils_;
};

// Sliding-window Lagrange interpolation of grid values at one point; outside
// the grid use the supplied linear extensions ext = {slope, offset}.
template <int PTS>
inline double lagrange_point(const Grid& g, const Vec& v, double xq,
                             std::array<double, 2> ext_l = {0.0, 0.0},
                             std::array<double, 2> ext_r = {0.0, 0.0}) {
  if (xq < g.y.front()) return ext_l[0] * xq + ext_l[1];
  if (xq > g.y.back()) return ext_r[0] * xq + ext_r[1];
  int base = static_cast<int>(std::floor((xq - g.y.front()) / g.h)) - (PTS / 2 - 1);
  if (base < 0) base = 0;
  if (base > g.n - PTS) base = g.n - PTS;
  const double t = (xq - g.y[base]) / g.h;
  double out = 0.0;
  for (int j = 0; j < PTS; ++j) {
    double l = 1.0;
    for (int k = 0; k < PTS; ++k)
      if (k != j) l *= (t - k) / (j - k);
    out += l * v[base + j];
  }
  return out;
}

}  // namespace gkdv
