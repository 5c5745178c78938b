#include <doctest.h>

#include <cmath>

#include "hypd/image.hpp"
#include "hypd/shrinkage.hpp"

using namespace hypd;

namespace {

Image seeded_noise(int n, std::uint64_t seed, double sigma = 1.0) {
  Image img(n);
  Rng rng(seed);
  for (double& x : img.v) x = sigma * rng.next_gaussian();
  return img;
}

Pyramid blank_pyramid(int n, int levels) {
  Pyramid p;
  p.n = n;
  p.levels = levels;
  p.details.resize(std::size_t(levels) * 3);
  for (int j = 1; j <= levels; ++j)
    for (int u = 1; u <= 3; ++u) p.detail(j, u) = Subband(n >> j);
  p.scaling = Subband(n >> levels);
  return p;
}

double energy(const std::vector<double>& v) {
  double e = 0.0;
  for (double x : v) e += x * x;
  return e;
}

} // namespace

TEST_CASE("magnitude combines component energies") {
  Pyramid a = blank_pyramid(16, 2), b = a, c = a;
  // all-zero components give an all-zero magnitude
  MagnitudePyramid zero = magnitude({a, b, c}, 1.0);
  for (const Subband& s : zero.details)
    for (double x : s.v) CHECK(x == 0.0);

  // single component with C=0 reproduces the squared coefficient
  a.detail(1, 1).at(2, 3) = -1.5;
  MagnitudePyramid single = magnitude({a}, 0.0);
  CHECK(single.detail(1, 1).at(2, 3) == doctest::Approx(2.25).epsilon(1e-15));

  // two equal unit components and one zero at C=1: (1+1+0)/2 = 1
  b.detail(1, 1).at(2, 3) = 1.0;
  a.detail(1, 1).at(2, 3) = 1.0;
  MagnitudePyramid m = magnitude({a, b, c}, 1.0);
  CHECK(m.detail(1, 1).at(2, 3) == doctest::Approx(1.0).epsilon(1e-15));

  Pyramid mismatched = blank_pyramid(32, 2);
  CHECK_THROWS_AS(magnitude({a, mismatched}, 1.0), std::invalid_argument);
}

TEST_CASE("universal thresholds") {
  const std::size_t k10 = std::size_t(std::llround(std::exp(10.0)));
  CHECK(universal_threshold(Method::riesz, k10) == doctest::Approx(20.0).epsilon(1e-4));
  CHECK(universal_threshold(Method::classic, 1 << 16) ==
        doctest::Approx(2.0 * std::log(65536.0)).epsilon(1e-15));
  CHECK(universal_threshold(Method::hypercomplex, 1 << 16) ==
        doctest::Approx(26.9929).epsilon(1e-4));
  for (std::size_t k : {std::size_t(16), std::size_t(1024), std::size_t(1) << 20}) {
    const double gap = universal_threshold(Method::hypercomplex, k) -
                       universal_threshold(Method::riesz, k);
    CHECK(gap == doctest::Approx(2.0 * std::log(std::log(double(k)))).epsilon(1e-12));
    CHECK(gap > 0.0);
  }
  CHECK_THROWS_AS(universal_threshold(Method::classic, 15), std::invalid_argument);
}

TEST_CASE("sigma estimate is the scaled median absolute deviation") {
  Pyramid p = blank_pyramid(64, 2);
  for (double& x : p.detail(1, 1).v) x = 0.6745;
  CHECK(estimate_sigma(p) == doctest::Approx(1.0).epsilon(1e-15));

  for (double& x : p.detail(1, 1).v) x *= -3.0;
  CHECK(estimate_sigma(p) == doctest::Approx(3.0).epsilon(1e-15));

  const FilterPair fp = filter_bank("la8");
  const Pyramid noise = dwt2(seeded_noise(256, 77), fp, 3);
  CHECK(estimate_sigma(noise) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("hard threshold keeps or kills by the joint magnitude") {
  Pyramid obs = blank_pyramid(16, 1);
  Pyramid quad = obs;
  obs.detail(1, 1).at(0, 0) = 1.5;
  quad.detail(1, 1).at(0, 0) = 1.5; // magnitude (2.25+2.25)/2 = 2.25 >= 2 -> keep
  obs.detail(1, 2).at(1, 1) = 1.5;  // magnitude 1.125 < 2 -> kill
  obs.scaling.at(0, 0) = 9.0;

  const MagnitudePyramid mag = magnitude({obs, quad}, 1.0);
  std::size_t kept = 0;
  const Pyramid out = hard_threshold(obs, mag, 1.0, 4.0, 1.0, &kept);
  CHECK(out.detail(1, 1).at(0, 0) == 1.5);
  CHECK(out.detail(1, 2).at(1, 1) == 0.0);
  CHECK(out.scaling.at(0, 0) == 9.0);
  CHECK(kept == 1);

  // lambda = 0 keeps everything
  const Pyramid all = hard_threshold(obs, mag, 1.0, 0.0, 1.0);
  for (std::size_t b = 0; b < all.details.size(); ++b)
    CHECK(all.details[b].v == obs.details[b].v);

  // huge lambda kills every detail coefficient but not the scaling block
  const Pyramid none = hard_threshold(obs, mag, 1.0, 1e12, 1.0);
  for (const Subband& s : none.details)
    for (double x : s.v) CHECK(x == 0.0);
  CHECK(none.scaling.at(0, 0) == 9.0);
}

TEST_CASE("magnitude rule equals the component energy rule bit for bit") {
  Rng rng(123);
  const FilterPair fp = filter_bank("d4");
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Pyramid> comps;
    for (int l = 0; l < 4; ++l)
      comps.push_back(dwt2(seeded_noise(32, 500 + 10 * trial + l), fp, 2));
    const double c_energy = 3.0;
    const double sigma = 0.5 + rng.next_unit();
    const double lambda2 = 4.0 * rng.next_unit() + 1.0;
    const MagnitudePyramid mag = magnitude(comps, c_energy);
    const Pyramid out = hard_threshold(comps[0], mag, sigma, lambda2, c_energy);
    const double cut = sigma * sigma * lambda2;
    for (std::size_t b = 0; b < out.details.size(); ++b)
      for (std::size_t i = 0; i < out.details[b].v.size(); ++i) {
        double s = 0.0;
        for (const Pyramid& p : comps) s += p.details[b].v[i] * p.details[b].v[i];
        const bool kept_energy_rule = s >= cut;
        const bool kept_mag_rule = out.details[b].v[i] != 0.0 ||
                                   comps[0].details[b].v[i] == 0.0;
        CHECK(kept_energy_rule == kept_mag_rule);
      }
  }
}

TEST_CASE("zero threshold with one spin is the identity pipeline") {
  const Image y = add_noise(make_blobs(64), NoiseSpec{0.4, 9});
  for (Method m : {Method::classic, Method::analytic, Method::riesz,
                   Method::hypercomplex}) {
    DenoiseConfig cfg;
    cfg.method = m;
    cfg.sigma = 0.4;
    cfg.lambda2 = 0.0;
    cfg.spins = 1;
    const Image out = denoise(y, cfg);
    double max_err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
      max_err = std::max(max_err, std::abs(out.v[i] - y.v[i]));
    CHECK(max_err < 1e-10);
  }
}

TEST_CASE("pure noise is almost entirely suppressed") {
  const Image y = seeded_noise(256, 314, 1.0);
  DenoiseConfig cfg;
  cfg.method = Method::hypercomplex;
  cfg.sigma = 1.0;
  cfg.spins = 1;
  DenoiseResult res = denoise_full(y, cfg);
  CHECK(res.kept_fraction <= 1e-3);

  // energy of the reconstruction, scaling block excluded
  const FilterPair fp = filter_bank(cfg.wavelet);
  Pyramid p = dwt2(res.output, fp, cfg.levels);
  double detail_energy = 0.0;
  for (const Subband& s : p.details) detail_energy += energy(s.v);
  CHECK(detail_energy <= 0.05 * energy(y.v));
}

TEST_CASE("joint-magnitude thresholding beats plain thresholding on texture") {
  const int n = 256, reps = 20;
  const Image q = make_oscillation(1.0, 0.15, M_PI / 6.0, n);
  const double sigma = sigma_for_snr(q, 4.0);
  int wins = 0;
  for (int r = 0; r < reps; ++r) {
    const Image y = add_noise(q, NoiseSpec{sigma, 9000 + std::uint64_t(r)});
    DenoiseConfig cfg;
    cfg.sigma = sigma;
    cfg.spins = 1;
    cfg.method = Method::hypercomplex;
    const Image xh = denoise(y, cfg);
    cfg.method = Method::classic;
    const Image xc = denoise(y, cfg);
    double mh = 0, mc = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      mh += (xh.v[i] - q.v[i]) * (xh.v[i] - q.v[i]);
      mc += (xc.v[i] - q.v[i]) * (xc.v[i] - q.v[i]);
    }
    if (mh < mc) ++wins;
  }
  CHECK(wins >= 18);
}

TEST_CASE("single-component pipeline is textbook hard thresholding") {
  const int n = 128;
  const Image y = add_noise(make_composite(n), NoiseSpec{0.7, 2024});
  const double sigma = 0.7;
  DenoiseConfig cfg;
  cfg.method = Method::classic;
  cfg.sigma = sigma;
  cfg.spins = 1;
  const Image out = denoise(y, cfg);

  // reference: zero every detail coefficient below sigma*sqrt(2 ln K)
  const FilterPair fp = filter_bank(cfg.wavelet);
  Pyramid pyr = dwt2(y, fp, cfg.levels);
  const double cut = sigma * std::sqrt(2.0 * std::log(double(n) * n));
  for (Subband& s : pyr.details)
    for (double& w : s.v)
      if (std::abs(w) < cut) w = 0.0;
  const Image ref = idwt2(pyr, fp);
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out.v[i] == doctest::Approx(ref.v[i]).epsilon(1e-12));
}

TEST_CASE("ridge magnitude concentrates along the ridge") {
  const int n = 128;
  const double theta = M_PI / 3.0, offset = 0.5 * n, width = 1.5;
  const Image e = make_edge(theta, offset, 2.0, width, n);
  const FilterPair fp = filter_bank("la8");
  for (Family fam : {Family::riesz, Family::hypercomplex}) {
    const QuadratureSet qs = quadrature_set(e, fam);
    std::vector<Pyramid> pyr;
    for (const Image& c : qs.components) pyr.push_back(dwt2(c, fp, 2));
    const MagnitudePyramid mag = magnitude(pyr, qs.energy_constant);
    // mass of M^2 within a narrow band parallel to the ridge, measured with
    // the torus distance (the periodized transform wraps the ridge) and a
    // per-subband centre absorbing the filter phase delay
    const double s1 = n * std::cos(theta), s2 = n * std::sin(theta);
    auto wrap = [&](double d) {
      double best = d;
      for (int i = -1; i <= 1; ++i)
        for (int j2 = -1; j2 <= 1; ++j2) {
          const double cand = d + i * s1 + j2 * s2;
          if (std::abs(cand) < std::abs(best)) best = cand;
        }
      return best;
    };
    double near = 0.0, total = 0.0;
    for (int j = 1; j <= 2; ++j)
      for (int u = 1; u <= 3; ++u) {
        const Subband& s = mag.detail(j, u);
        const double scale = double(1 << j);
        std::vector<std::pair<double, double>> mass; // (wrapped d, magnitude)
        double sub_total = 0.0;
        for (int k1 = 0; k1 < s.size; ++k1)
          for (int k2 = 0; k2 < s.size; ++k2) {
            const double d = wrap(std::cos(theta) * scale * k1 +
                                  std::sin(theta) * scale * k2 - offset);
            mass.push_back({d, s.at(k1, k2)});
            sub_total += s.at(k1, k2);
          }
        std::sort(mass.begin(), mass.end());
        double acc = 0.0, center = 0.0; // mass-weighted median
        for (const auto& [d, m] : mass) {
          acc += m;
          if (acc >= 0.5 * sub_total) { center = d; break; }
        }
        const double band = 8.0 * width + 2.0 * scale;
        for (const auto& [d, m] : mass) {
          total += m;
          if (std::abs(d - center) < band) near += m;
        }
      }
    CAPTURE(family_name(fam));
    CHECK(near / total > 0.85);
  }
}

TEST_CASE("raising the threshold only removes coefficients") {
  const Image y = add_noise(make_composite(64), NoiseSpec{0.5, 55});
  const FilterPair fp = filter_bank("la8");
  const QuadratureSet qs = quadrature_set(y, Family::riesz);
  std::vector<Pyramid> comps;
  for (const Image& c : qs.components) comps.push_back(dwt2(c, fp, 3));
  const MagnitudePyramid mag = magnitude(comps, qs.energy_constant);
  std::size_t prev_kept = SIZE_MAX;
  Pyramid prev = comps[0];
  for (double lambda2 : {0.0, 1.0, 4.0, 9.0, 25.0, 100.0}) {
    std::size_t kept = 0;
    const Pyramid cur = hard_threshold(comps[0], mag, 0.5, lambda2, 1.0, &kept);
    CHECK(kept <= prev_kept);
    for (std::size_t b = 0; b < cur.details.size(); ++b)
      for (std::size_t i = 0; i < cur.details[b].v.size(); ++i)
        if (prev.details[b].v[i] == 0.0 && comps[0].details[b].v[i] != 0.0)
          CHECK(cur.details[b].v[i] == 0.0); // once killed, stays killed
    prev = cur;
    prev_kept = kept;
  }
}

TEST_CASE("single-spin pipeline commutes with coarse-stride shifts") {
  const int n = 64, levels = 3, stride = 1 << levels;
  const Image y = add_noise(make_composite(n), NoiseSpec{0.6, 70});
  DenoiseConfig cfg;
  cfg.method = Method::riesz;
  cfg.sigma = 0.6;
  cfg.spins = 1;
  cfg.levels = levels;
  const Image a = circular_shift(denoise(y, cfg), stride, stride);
  const Image b = denoise(circular_shift(y, stride, stride), cfg);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.v[i] == doctest::Approx(b.v[i]).epsilon(1e-12));
}

TEST_CASE("denoising is deterministic") {
  const Image y = add_noise(make_blobs(64), NoiseSpec{0.3, 101});
  DenoiseConfig cfg;
  cfg.method = Method::hypercomplex;
  cfg.spins = 2;
  const Image a = denoise(y, cfg);
  const Image b = denoise(y, cfg);
  CHECK(a.v == b.v);
}
