#pragma once

// The estimator: joint coefficient magnitudes, universal thresholds, the
// keep/kill rule and the cycle-spun denoising pipeline.
//
// A coefficient with components W_0..W_L (the image and its quadrature
// components at one pyramid index) has magnitude
//     M^2 = (1/(C+1)) * sum_l W_l^2
// and survives hard thresholding iff M^2 >= sigma^2 lambda^2 / (C+1), i.e.
// iff sum_l W_l^2 >= sigma^2 lambda^2. C+1 is a power of two for every
// method, so both forms of the rule agree bit-for-bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypd/image.hpp"
#include "hypd/parallel.hpp"
#include "hypd/quadrature.hpp"
#include "hypd/wavelet.hpp"

namespace hypd {

enum class Method { classic, analytic, riesz, hypercomplex };

inline Method method_from_string(const std::string& s) {
  if (s == "c") return Method::classic;
  if (s == "a") return Method::analytic;
  if (s == "r") return Method::riesz;
  if (s == "h") return Method::hypercomplex;
  throw std::invalid_argument("unknown method: " + s + " (expected c, a, r or h)");
}

inline const char* method_name(Method m) {
  switch (m) {
    case Method::classic: return "c";
    case Method::analytic: return "a";
    case Method::riesz: return "r";
    default: return "h";
  }
}

// Energy constant C of the component set a method thresholds with.
inline double method_energy_constant(Method m) {
  switch (m) {
    case Method::classic: return 0.0;
    case Method::analytic: return 1.0;  // image + one quadrature component
    case Method::riesz: return 1.0;
    default: return 3.0;
  }
}

// Same index structure as a Pyramid; entries are squared magnitudes.
using MagnitudePyramid = Pyramid;

inline MagnitudePyramid magnitude(const std::vector<Pyramid>& components,
                                  double energy_constant) {
  if (components.empty()) throw std::invalid_argument("no component pyramids");
  const Pyramid& first = components.front();
  for (const Pyramid& p : components)
    if (p.n != first.n || p.levels != first.levels)
      throw std::invalid_argument("component pyramids disagree in shape");
  MagnitudePyramid mag = first;
  const double inv = 1.0 / (energy_constant + 1.0);
  auto accumulate = [&](std::vector<double>& out, std::size_t block,
                        bool scaling_block) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      double s = 0.0;
      for (const Pyramid& p : components) {
        const double w = scaling_block ? p.scaling.v[i] : p.details[block].v[i];
        s += w * w;
      }
      out[i] = s * inv;
    }
  };
  for (std::size_t b = 0; b < mag.details.size(); ++b)
    accumulate(mag.details[b].v, b, false);
  accumulate(mag.scaling.v, 0, true);
  return mag;
}

// lambda^2 for K coefficients: 2 log K for the single-component, analytic
// and riesz rules; 2 log K + 2 log log K for the hypercomplex rule.
inline double universal_threshold(Method m, std::size_t coefficient_count) {
  if (coefficient_count < 16)
    throw std::invalid_argument("universal threshold needs at least 16 coefficients");
  const double logk = std::log(static_cast<double>(coefficient_count));
  if (m == Method::hypercomplex) return 2.0 * logk + 2.0 * std::log(logk);
  return 2.0 * logk;
}

// Median absolute deviation of the finest diagonal subband over 0.6745.
inline double estimate_sigma(const Pyramid& pyr) {
  const Subband& band = pyr.detail(1, 1);
  if (band.v.empty()) throw std::invalid_argument("pyramid has no level-1 diagonal band");
  std::vector<double> a(band.v.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(band.v[i]);
  auto median_inplace = [](std::vector<double>& x) {
    const std::size_t h = x.size() / 2;
    std::nth_element(x.begin(), x.begin() + h, x.end());
    double m = x[h];
    if (x.size() % 2 == 0) {
      std::nth_element(x.begin(), x.begin() + h - 1, x.begin() + h);
      m = 0.5 * (m + x[h - 1]);
    }
    return m;
  };
  return median_inplace(a) / 0.6745;
}

// Keep/kill on the detail subbands; the level-J scaling block always passes.
inline Pyramid hard_threshold(const Pyramid& observed, const MagnitudePyramid& mag,
                              double sigma, double lambda2, double energy_constant,
                              std::size_t* kept_out = nullptr) {
  if (!(sigma > 0.0)) throw std::invalid_argument("hard_threshold needs sigma > 0");
  if (observed.n != mag.n || observed.levels != mag.levels)
    throw std::invalid_argument("pyramid/magnitude shape mismatch");
  Pyramid out = observed;
  const double cutoff = sigma * sigma * lambda2 / (energy_constant + 1.0);
  std::size_t kept = 0;
  for (std::size_t b = 0; b < out.details.size(); ++b) {
    std::vector<double>& w = out.details[b].v;
    const std::vector<double>& m2 = mag.details[b].v;
    if (w.size() != m2.size())
      throw std::invalid_argument("pyramid/magnitude shape mismatch");
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (m2[i] >= cutoff) ++kept;
      else w[i] = 0.0;
    }
  }
  if (kept_out) *kept_out = kept;
  return out;
}

struct DenoiseConfig {
  Method method = Method::hypercomplex;
  std::string wavelet = "la8";
  int levels = 3;
  std::optional<double> sigma;   // absent: MAD estimate from the input
  std::optional<double> lambda2; // absent: universal threshold with K = n^2
  int spins = 8;                 // averages over spins x spins circular shifts
  std::uint64_t seed = 0;        // reserved for seeded variants; pipeline is deterministic
  int threads = 0;               // 0: all available cores
};

struct DenoiseResult {
  Image output;
  double sigma_used = 0.0;
  double lambda2_used = 0.0;
  double kept_fraction = 0.0; // kept detail coefficients, averaged over spins
};

namespace detail {

// Quadrature components a method thresholds with (component 0 is the image).
inline std::vector<Image> method_components(const Image& y, Method m) {
  std::vector<Image> comp;
  switch (m) {
    case Method::classic:
      comp.push_back(y);
      break;
    case Method::analytic: {
      comp.push_back(y);
      const std::vector<cplx> spec = dft2(y);
      comp.push_back(apply_spectral_filter(spec, hct_filter(y.n, 3)));
      break;
    }
    case Method::riesz: {
      QuadratureSet qs = quadrature_set(y, Family::riesz);
      comp = std::move(qs.components);
      break;
    }
    case Method::hypercomplex: {
      QuadratureSet qs = quadrature_set(y, Family::hypercomplex);
      comp = std::move(qs.components);
      break;
    }
  }
  return comp;
}

} // namespace detail

inline DenoiseResult denoise_full(const Image& y, const DenoiseConfig& cfg) {
  if (cfg.spins < 1) throw std::invalid_argument("spin grid size must be >= 1");
  const FilterPair fp = filter_bank(cfg.wavelet);
  const double c_energy = method_energy_constant(cfg.method);
  const int n = y.n;

  const double sigma =
      cfg.sigma ? *cfg.sigma : estimate_sigma(dwt2(y, fp, cfg.levels));
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  const double lambda2 =
      cfg.lambda2 ? *cfg.lambda2
                  : universal_threshold(cfg.method, std::size_t(n) * n);

  // Circular shifts commute with the quadrature filters, so the components
  // are computed once and shifted per spin.
  const std::vector<Image> base = detail::method_components(y, cfg.method);

  const int s = cfg.spins;
  const int nspins = s * s;
  std::vector<Image> recon(nspins);
  std::vector<std::size_t> kept(nspins, 0);
  const std::size_t coarse = std::size_t(n >> cfg.levels) * std::size_t(n >> cfg.levels);
  const std::size_t detail_count = std::size_t(n) * n - coarse;

  parallel_for(nspins, cfg.threads, [&](int idx) {
    const int d1 = idx / s, d2 = idx % s;
    std::vector<Pyramid> pyramids;
    pyramids.reserve(base.size());
    for (const Image& comp : base)
      pyramids.push_back(dwt2(circular_shift(comp, d1, d2), fp, cfg.levels));
    const MagnitudePyramid mag = magnitude(pyramids, c_energy);
    const Pyramid thresholded =
        hard_threshold(pyramids[0], mag, sigma, lambda2, c_energy, &kept[idx]);
    recon[idx] = circular_shift(idwt2(thresholded, fp), -d1, -d2);
  });

  DenoiseResult res;
  res.output = Image(n);
  double kept_total = 0.0;
  for (int idx = 0; idx < nspins; ++idx) { // fixed order: deterministic sum
    for (std::size_t i = 0; i < res.output.size(); ++i)
      res.output.v[i] += recon[idx].v[i];
    kept_total += static_cast<double>(kept[idx]);
  }
  const double inv = 1.0 / nspins;
  for (double& x : res.output.v) x *= inv;
  res.sigma_used = sigma;
  res.lambda2_used = lambda2;
  res.kept_fraction = kept_total * inv / static_cast<double>(detail_count);
  return res;
}

inline Image denoise(const Image& y, const DenoiseConfig& cfg) {
  return denoise_full(y, cfg).output;
}

} // namespace hypd
