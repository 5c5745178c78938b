#pragma once

// Distributions of pure-noise coefficient magnitudes and Monte Carlo
// verification of the second-order structure of decomposed quadrature noise.
//
// For white noise, the pyramid coefficient of the image and of its
// quadrature components at one index form an approximately independent
// Gaussian vector. Component variances: hypercomplex all sigma^2; riesz
// split sigma^2 (a_u, 1 - a_u) with a_u = 1/2 on the diagonal and scaling
// classes and a_u ~ 0.8737 / 0.1263 on the horizontal/vertical classes.
// The normalized magnitude is then chi^2_4 (hypercomplex) or the weighted
// three-term chi-square below (riesz).

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "hypd/image.hpp"
#include "hypd/numeric.hpp"
#include "hypd/quadrature.hpp"
#include "hypd/shrinkage.hpp"
#include "hypd/wavelet.hpp"

namespace hypd {

struct RieszVarianceTable {
  // fraction[u] is the variance fraction of the first riesz component in
  // subband class u (1..4); the second component carries 1 - fraction[u].
  std::array<double, 5> fraction;
};

inline RieszVarianceTable riesz_variance_constants() {
  RieszVarianceTable t{};
  const double a2 = 0.5 + 2.0 * std::atan(0.5) - 0.5 * std::atan(2.0);
  t.fraction[1] = 0.5;
  t.fraction[2] = a2;
  t.fraction[3] = 1.0 - a2;
  t.fraction[4] = 0.5;
  return t;
}

// ---------------------------------------------------------------------------
// Closed-form / quadrature laws of the normalized null magnitudes.
// ---------------------------------------------------------------------------

namespace detail {

// integral_0^s exp(w^2 - s^2) dw, the scaled Dawson-type integral.
inline double dawson_scaled(double s) {
  if (s <= 0.0) return 0.0;
  const QuadResult q = integrate(
      [s](double w) { return std::exp(w * w - s * s); }, 0.0, s, 1e-13);
  return q.value;
}

} // namespace detail

// Density of T = Z1^2 + (Z2^2 + Z3^2)/2 at t >= 0:
//   f(t) = exp(-t) (2/sqrt(pi)) integral_0^sqrt(t/2) exp(w^2) dw.
inline double riesz_magnitude_pdf(double t) {
  if (t < 0.0) throw std::invalid_argument("density argument must be >= 0");
  if (t == 0.0) return 0.0;
  const double s = std::sqrt(0.5 * t);
  return 1.1283791670955125738962 /* 2/sqrt(pi) */ *
         std::exp(-0.5 * t) * detail::dawson_scaled(s);
}

// CDF of the same law by adaptive quadrature of the density.
inline double riesz_magnitude_cdf(double t) {
  if (t < 0.0) throw std::invalid_argument("cdf argument must be >= 0");
  if (t == 0.0) return 0.0;
  const QuadResult q =
      integrate([](double x) { return riesz_magnitude_pdf(x); }, 0.0, t, 1e-10);
  return std::min(1.0, q.value);
}

// P(chi^2_4 > x) = exp(-x/2) (1 + x/2).
inline double chisq4_tail(double x) {
  if (x < 0.0) throw std::invalid_argument("tail argument must be >= 0");
  return std::exp(-0.5 * x) * (1.0 + 0.5 * x);
}

// P(Z1^2 + a Z2^2 + (1-a) Z3^2 > x) by nested quadrature.
inline double weighted_three_term_tail(double x, double a) {
  if (x < 0.0) throw std::invalid_argument("tail argument must be >= 0");
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("weight must be in (0,1)");
  if (x == 0.0) return 1.0;
  const double c = 1.0 - a;
  // two-term tail P(Z1^2 + c Z3^2 > y)
  auto two_term = [c](double y) {
    if (y <= 0.0) return 1.0;
    const double direct = std::erfc(std::sqrt(0.5 * y));
    const QuadResult q = integrate(
        [y, c](double z) {
          const double rem = std::max(0.0, y - z * z);
          return 2.0 * normal_pdf(z) * std::erfc(std::sqrt(0.5 * rem / c));
        },
        0.0, std::sqrt(y), 1e-11);
    return direct + q.value;
  };
  const double wstar = std::sqrt(x / a);
  const QuadResult outer = integrate(
      [&two_term, x, a](double w) {
        return 2.0 * normal_pdf(w) * two_term(x - a * w * w);
      },
      0.0, wstar, 1e-9);
  return outer.value + std::erfc(wstar * 0.7071067811865475244);
}

// Tail of the normalized riesz null magnitude for subband class u.
inline double riesz_mixture_tail(double x, int u) {
  if (u < 1 || u > 4) throw std::invalid_argument("subband class must be 1..4");
  const RieszVarianceTable t = riesz_variance_constants();
  return weighted_three_term_tail(x, t.fraction[u]);
}

// ---------------------------------------------------------------------------
// Monte Carlo moments of decomposed quadrature noise.
// ---------------------------------------------------------------------------

struct MomentEntry {
  int level = 0;           // j
  int subband_class = 0;   // u, 1..4 (4 = scaling block at the deepest level)
  int dim = 0;             // number of components (image + quadrature)
  std::size_t count = 0;   // pooled coefficient count
  std::array<double, 5> mean{};
  std::array<std::array<double, 5>, 5> cov{};
};

struct MomentReport {
  Family family = Family::riesz;
  int n = 0;
  int reps = 0;
  int levels = 0;
  std::vector<MomentEntry> entries;

  const MomentEntry& entry(int level, int subband_class) const {
    for (const MomentEntry& e : entries)
      if (e.level == level && e.subband_class == subband_class) return e;
    throw std::invalid_argument("no such moment entry");
  }
};

// Unit-variance white noise replications; coefficients pooled across
// positions within each (level, class) block. Coefficients of an orthonormal
// transform of white noise are exchangeable within a block, so pooling
// positions stands in for replicating a single representative index.
inline MomentReport empirical_noise_moments(Family family, int n, int reps,
                                            std::uint64_t seed, int levels = 3,
                                            const std::string& wavelet = "la8") {
  if (n < 64) throw std::invalid_argument("need n >= 64 for stable moments");
  if (reps < 1) throw std::invalid_argument("need at least one replication");
  const FilterPair fp = filter_bank(wavelet);
  const int dim = family_component_count(family) + 1;

  struct Acc {
    std::array<double, 5> s{};
    std::array<std::array<double, 5>, 5> ss{};
    std::size_t count = 0;
  };
  std::vector<Acc> acc(static_cast<std::size_t>(levels) * 3 + 1);
  auto acc_index = [levels](int j, int u) {
    return u == 4 ? std::size_t(levels) * 3 : std::size_t(j - 1) * 3 + (u - 1);
  };

  for (int rep = 0; rep < reps; ++rep) {
    Image eps(n);
    Rng rng(derive_seed(seed, std::uint64_t(rep)));
    for (double& x : eps.v) x = rng.next_gaussian();
    const QuadratureSet qs = quadrature_set(eps, family);
    std::vector<Pyramid> pyr;
    pyr.reserve(qs.components.size());
    for (const Image& c : qs.components) pyr.push_back(dwt2(c, fp, levels));

    auto accumulate = [&](Acc& a, int j, int u) {
      const std::size_t block = (u == 4) ? 0 : std::size_t(j - 1) * 3 + (u - 1);
      const std::size_t m =
          (u == 4) ? pyr[0].scaling.v.size() : pyr[0].details[block].v.size();
      for (std::size_t i = 0; i < m; ++i) {
        double w[5];
        for (int l = 0; l < dim; ++l)
          w[l] = (u == 4) ? pyr[l].scaling.v[i] : pyr[l].details[block].v[i];
        for (int l = 0; l < dim; ++l) {
          a.s[l] += w[l];
          for (int m2 = l; m2 < dim; ++m2) a.ss[l][m2] += w[l] * w[m2];
        }
        ++a.count;
      }
    };
    for (int j = 1; j <= levels; ++j)
      for (int u = 1; u <= 3; ++u) accumulate(acc[acc_index(j, u)], j, u);
    accumulate(acc[acc_index(levels, 4)], levels, 4);
  }

  MomentReport report;
  report.family = family;
  report.n = n;
  report.reps = reps;
  report.levels = levels;
  for (int j = 1; j <= levels; ++j)
    for (int u = 1; u <= 4; ++u) {
      if (u == 4 && j != levels) continue;
      const Acc& a = acc[acc_index(j, u)];
      MomentEntry e;
      e.level = j;
      e.subband_class = u;
      e.dim = dim;
      e.count = a.count;
      const double inv = 1.0 / double(a.count);
      for (int l = 0; l < dim; ++l) e.mean[l] = a.s[l] * inv;
      for (int l = 0; l < dim; ++l)
        for (int m2 = l; m2 < dim; ++m2) {
          const double c = a.ss[l][m2] * inv - e.mean[l] * e.mean[m2];
          e.cov[l][m2] = c;
          e.cov[m2][l] = c;
        }
      report.entries.push_back(e);
    }
  return report;
}

// Fraction of pure-noise replications in which any detail coefficient
// survives the family's universal threshold (or an explicit lambda^2).
inline double max_exceedance(Family family, std::size_t coefficient_count,
                             int reps, std::uint64_t seed, int levels = 3,
                             const std::string& wavelet = "la8",
                             std::optional<double> lambda2_override = {}) {
  const int n = static_cast<int>(std::llround(std::sqrt(double(coefficient_count))));
  if (std::size_t(n) * n != coefficient_count || !is_power_of_two(n))
    throw std::invalid_argument("coefficient count must be the square of a dyadic side");
  const FilterPair fp = filter_bank(wavelet);
  const Method m =
      family == Family::riesz ? Method::riesz : Method::hypercomplex;
  const double lambda2 = lambda2_override
                             ? *lambda2_override
                             : universal_threshold(m, coefficient_count);
  const double c_energy = family_energy_constant(family);
  const double cutoff = lambda2 / (c_energy + 1.0); // sigma = 1
  int exceeded = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Image eps(n);
    Rng rng(derive_seed(seed, std::uint64_t(rep)));
    for (double& x : eps.v) x = rng.next_gaussian();
    const QuadratureSet qs = quadrature_set(eps, family);
    std::vector<Pyramid> pyr;
    for (const Image& c : qs.components) pyr.push_back(dwt2(c, fp, levels));
    const MagnitudePyramid mag = magnitude(pyr, c_energy);
    bool any = false;
    for (const Subband& s : mag.details) {
      for (double m2 : s.v)
        if (m2 >= cutoff) { any = true; break; }
      if (any) break;
    }
    exceeded += any ? 1 : 0;
  }
  return double(exceeded) / double(reps);
}

// CSV rows: family,u,statistic,value,stderr. Variance ratios are relative to
// the unit noise variance; stderr uses the Gaussian large-sample form.
inline void write_moment_csv(const MomentReport& report, std::ostream& os) {
  os.precision(15);
  os << "family,u,statistic,value,stderr\n";
  const char* fam = family_name(report.family);
  for (const MomentEntry& e : report.entries) {
    const double inv_sqrt = 1.0 / std::sqrt(double(e.count));
    for (int l = 0; l < e.dim; ++l) {
      os << fam << ',' << e.subband_class << ",var_l" << l << "_j" << e.level
         << ',' << e.cov[l][l] << ',' << e.cov[l][l] * std::sqrt(2.0) * inv_sqrt
         << "\n";
    }
    for (int l = 0; l < e.dim; ++l)
      for (int m2 = l + 1; m2 < e.dim; ++m2) {
        const double denom = std::sqrt(e.cov[l][l] * e.cov[m2][m2]);
        const double rho = denom > 0 ? e.cov[l][m2] / denom : 0.0;
        os << fam << ',' << e.subband_class << ",corr_l" << l << "l" << m2
           << "_j" << e.level << ',' << rho << ',' << inv_sqrt << "\n";
      }
  }
}

} // namespace hypd
