#pragma once

// Shared numeric utilities: normal distribution helpers and an adaptive
// Gauss-Kronrod 15(7) integrator used by the statistics and risk code.

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hypd {

inline double normal_pdf(double x) {
  return 0.3989422804014326779399461 * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244008444);
}

// Regularized lower incomplete gamma with shape 1/2: P(1/2, x) = erf(sqrt(x)).
inline double reg_gamma_half(double x) { return std::erf(std::sqrt(x)); }

// CDF of the noncentral chi-square with df degrees of freedom and
// noncentrality ncp, as the Poisson mixture of central chi-square CDFs.
// Both the Poisson weights and the gamma-CDF terms run on stable forward
// recurrences; df is 2 or 3 here so the base terms are closed forms.
inline double noncentral_chisq_cdf(double x, int df, double ncp,
                                   double tol = 1e-12) {
  if (x <= 0.0) return 0.0;
  const double y = 0.5 * x;
  const double h = 0.5 * ncp;
  const double a0 = 0.5 * df;
  // g = P(a0 + i, y); t = y^(a0+i) e^(-y) / Gamma(a0+i+1)
  double g, t;
  if (df == 2) {
    g = -std::expm1(-y);
    t = y * std::exp(-y);
  } else if (df == 3) {
    const double sy = std::sqrt(y);
    g = std::erf(sy) - 2.0 * sy * std::exp(-y) * 0.5641895835477562869481;
    t = y * sy * std::exp(-y) / 1.3293403881791370204736; // Gamma(5/2)
  } else {
    throw std::invalid_argument("noncentral_chisq_cdf supports df 2 and 3");
  }
  double pois = std::exp(-h);
  double sum = pois * g;
  double mass = pois;
  for (int i = 0; i < 10000; ++i) {
    g -= t;
    if (g < 0.0) g = 0.0;
    t *= y / (a0 + i + 1.0);
    pois *= h / (i + 1.0);
    mass += pois;
    sum += pois * g;
    if (1.0 - mass < tol && pois * g < tol) break;
  }
  return std::min(1.0, sum);
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

// QUADPACK 15-point Kronrod / 7-point Gauss pair on [-1, 1].
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double fv = f(c - h * gk_x[i]) + f(c + h * gk_x[i]);
    resk += gk_wk[i] * fv;
    if (i % 2 == 1) resg += gk_wg[i / 2] * fv;
  }
  const double fc = f(c);
  resk += gk_wk[7] * fc;
  resg += gk_wg[3] * fc;
  kronrod = resk * h;
  err = std::abs((resk - resg) * h);
}

} // namespace detail

// Adaptive bisection on top of the GK15 rule. The error field is the sum of
// per-segment Kronrod-Gauss gaps, a conservative estimate for smooth f.
template <class F>
QuadResult integrate(const F& f, double a, double b, double abs_tol,
                     int max_depth = 48) {
  struct Seg { double a, b, val, err; int depth; };
  double val, err;
  detail::gk15(f, a, b, val, err);
  if (err <= abs_tol || a == b) return {val, err};

  // explicit stack; worst segments are split first by simple LIFO recursion
  Seg stack[2048];
  int top = 0;
  int splits_left = 20000;
  stack[top++] = {a, b, val, err, 0};
  QuadResult out;
  while (top > 0) {
    Seg s = stack[--top];
    const double local_tol = abs_tol * (s.b - s.a) / (b - a);
    if (!(s.err > local_tol) || s.depth >= max_depth || top >= 2044 ||
        --splits_left < 0) {
      out.value += s.val;
      out.error += s.err;
      continue;
    }
    const double m = 0.5 * (s.a + s.b);
    Seg l{s.a, m, 0, 0, s.depth + 1}, r{m, s.b, 0, 0, s.depth + 1};
    detail::gk15(f, l.a, l.b, l.val, l.err);
    detail::gk15(f, r.a, r.b, r.val, r.err);
    stack[top++] = l;
    stack[top++] = r;
  }
  return out;
}

} // namespace hypd
