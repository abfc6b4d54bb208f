#pragma once
// Small shared utilities: thread cap, deterministic parallel map, least-squares fits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace gkdv {

using Vec = std::vector<double>;

inline int thread_cap() {
  if (const char* s = std::getenv("GKDV_LAB_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Static-schedule parallel map. Job i writes only its own slots, so the result
// is identical whatever GKDV_LAB_THREADS says.
inline void parallel_for(int njobs, const std::function<void(int)>& fn) {
  int nt = std::min(thread_cap(), njobs);
  if (nt <= 1) {
    for (int i = 0; i < njobs; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&fn, t, nt, njobs] {
      for (int i = t; i < njobs; i += nt) fn(i);
    });
  for (auto& th : pool) th.join();
}

inline std::string g15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

struct LineFit {
  double slope = 0.0;
  double offset = 0.0;
  double resid = 0.0;  // max |slope*y + offset - f| over the window
  int count = 0;
};

// f ~ slope*y + offset, least squares over samples with lo <= y <= hi.
// Centered in y so the normal equations stay well conditioned on far windows.
inline LineFit fit_line(const Vec& y, const Vec& f, double lo, double hi) {
  double sw = 0, sy = 0, sf = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (y[i] < lo || y[i] > hi) continue;
    sw += 1.0;
    sy += y[i];
    sf += f[i];
  }
  if (sw < 2.0) throw std::runtime_error("fit window holds fewer than two samples");
  const double ym = sy / sw, fm = sf / sw;
  double suu = 0, suf = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (y[i] < lo || y[i] > hi) continue;
    const double u = y[i] - ym;
    suu += u * u;
    suf += u * (f[i] - fm);
  }
  LineFit r;
  r.slope = suf / suu;
  r.offset = fm - r.slope * ym;
  r.count = static_cast<int>(sw);
  for (size_t i = 0; i < y.size(); ++i) {
    if (y[i] < lo || y[i] > hi) continue;
    r.resid = std::max(r.resid, std::abs(r.slope * y[i] + r.offset - f[i]));
  }
  return r;
}

struct RateFit {
  double exponent = 0.0;   // err ~ prefactor * exp(-exponent * z)
  double prefactor = 0.0;
  double resid = 0.0;      // max |log err - log fit|
  std::vector<std::pair<double, double>> samples;
};

// Log-linear decay-rate fit; the two largest-z samples carry double weight so
// the asymptotic regime dominates the slope.
inline RateFit fit_rate(const Vec& zs, const Vec& errs) {
  const size_t n = zs.size();
  if (n < 2) throw std::runtime_error("rate fit needs at least two samples");
  Vec le(n), w(n, 1.0);
  for (size_t i = 0; i < n; ++i) {
    if (!(errs[i] > 0.0)) throw std::runtime_error("rate fit needs positive errors");
    le[i] = std::log(errs[i]);
  }
  if (n >= 2) w[n - 1] = w[n - 2] = 2.0;
  double sw = 0, sz = 0, sl = 0;
  for (size_t i = 0; i < n; ++i) {
    sw += w[i];
    sz += w[i] * zs[i];
    sl += w[i] * le[i];
  }
  const double zm = sz / sw, lm = sl / sw;
  double suu = 0, sul = 0;
  for (size_t i = 0; i < n; ++i) {
    const double u = zs[i] - zm;
    suu += w[i] * u * u;
    sul += w[i] * u * (le[i] - lm);
  }
  const double slope = sul / suu;               // log err ~ lm + slope*(z - zm)
  RateFit r;
  r.exponent = -slope;
  r.prefactor = std::exp(lm - slope * zm);
  for (size_t i = 0; i < n; ++i) {
    r.samples.emplace_back(zs[i], errs[i]);
    r.resid = std::max(r.resid, std::abs(lm + slope * (zs[i] - zm) - le[i]));
  }
  return r;
}

// f ~ c2*z^2 + c1*z + c0, plain normal equations after centering.
struct QuadFit {
  double c2 = 0, c1 = 0, c0 = 0;
};

inline QuadFit fit_quad(const Vec& z, const Vec& f) {
  const size_t n = z.size();
  if (n < 3) throw std::runtime_error("quadratic fit needs at least three samples");
  double zm = 0;
  for (double v : z) zm += v;
  zm /= static_cast<double>(n);
  // u = z - zm; solve 3x3 normal equations in u, then expand back.
  double s0 = static_cast<double>(n), s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  double t0 = 0, t1 = 0, t2 = 0;
  for (size_t i = 0; i < n; ++i) {
    const double u = z[i] - zm, u2 = u * u;
    s1 += u;
    s2 += u2;
    s3 += u2 * u;
    s4 += u2 * u2;
    t0 += f[i];
    t1 += u * f[i];
    t2 += u2 * f[i];
  }
  // Cramer on the symmetric system [[s0,s1,s2],[s1,s2,s3],[s2,s3,s4]] x = [t0,t1,t2]
  const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) + s2 * (s1 * s3 - s2 * s2);
  const double a0 = (t0 * (s2 * s4 - s3 * s3) - s1 * (t1 * s4 - s3 * t2) + s2 * (t1 * s3 - s2 * t2)) / det;
  const double a1 = (s0 * (t1 * s4 - t2 * s3) - t0 * (s1 * s4 - s3 * s2) + s2 * (s1 * t2 - s2 * t1)) / det;
  const double a2 = (s0 * (s2 * t2 - s3 * t1) - s1 * (s1 * t2 - s3 * t0) + t0 * (s1 * s3 - s2 * s2)) / det;
  QuadFit q;
  q.c2 = a2;
  q.c1 = a1 - 2.0 * a2 * zm;
  q.c0 = a0 - a1 * zm + a2 * zm * zm;
  return q;
}

inline double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace gkdv
