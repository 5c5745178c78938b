#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "hypd/image.hpp"
#include "hypd/wavelet.hpp"

using namespace hypd;

namespace {

Image seeded_noise(int n, std::uint64_t seed, double sigma = 1.0) {
  Image img(n);
  Rng rng(seed);
  for (double& x : img.v) x = sigma * rng.next_gaussian();
  return img;
}

double energy(const std::vector<double>& v) {
  double e = 0.0;
  for (double x : v) e += x * x;
  return e;
}

double pyramid_energy(const Pyramid& p) {
  double e = energy(p.scaling.v);
  for (const Subband& s : p.details) e += energy(s.v);
  return e;
}

} // namespace

TEST_CASE("filter banks satisfy the orthonormal identities") {
  const double sqrt2 = std::sqrt(2.0);
  for (const char* name : {"haar", "d4", "la8"}) {
    const FilterPair fp = filter_bank(name);
    const int L = int(fp.g.size());
    double sg = 0, sh = 0, sg2 = 0, sh2 = 0;
    for (int l = 0; l < L; ++l) {
      sg += fp.g[l];
      sh += fp.h[l];
      sg2 += fp.g[l] * fp.g[l];
      sh2 += fp.h[l] * fp.h[l];
    }
    CAPTURE(name);
    CHECK(std::abs(sg - sqrt2) < 1e-12);
    CHECK(std::abs(sh) < 1e-12);
    CHECK(std::abs(sg2 - 1.0) < 1e-12);
    CHECK(std::abs(sh2 - 1.0) < 1e-12);
    for (int l = 0; l < L; ++l)
      CHECK(std::abs(fp.h[l] - ((l % 2) ? -1.0 : 1.0) * fp.g[L - 1 - l]) < 1e-12);
    // even-shift orthogonality of the scaling filter
    for (int k = 1; 2 * k < L; ++k) {
      double dot = 0;
      for (int l = 0; l + 2 * k < L; ++l) dot += fp.g[l] * fp.g[l + 2 * k];
      CHECK(std::abs(dot) < 1e-12);
    }
  }
  CHECK_THROWS_AS(filter_bank("db97"), std::invalid_argument);
}

TEST_CASE("haar bank has the textbook coefficients") {
  const FilterPair fp = filter_bank("haar");
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(fp.g[0] == doctest::Approx(r).epsilon(1e-15));
  CHECK(fp.g[1] == doctest::Approx(r).epsilon(1e-15));
  CHECK(fp.h[0] == doctest::Approx(r).epsilon(1e-15));
  CHECK(fp.h[1] == doctest::Approx(-r).epsilon(1e-15));
}

TEST_CASE("constant images transform to a pure scaling block") {
  const FilterPair fp = filter_bank("la8");
  const double c = 2.75;
  const Image img(64, c);
  const Pyramid pyr = dwt2(img, fp, 3);
  for (const Subband& s : pyr.details)
    for (double w : s.v) CHECK(std::abs(w) < 1e-11);
  for (double w : pyr.scaling.v)
    CHECK(w == doctest::Approx(8.0 * c).epsilon(1e-12));
  CHECK(pyr.coefficient_count() == 64u * 64u);
}

TEST_CASE("analysis-synthesis round trip is exact to rounding") {
  for (const char* name : {"haar", "d4", "la8"}) {
    const FilterPair fp = filter_bank(name);
    for (int levels : {1, 3, 5}) {
      const Image img = seeded_noise(64, 42 + levels);
      const Image back = idwt2(dwt2(img, fp, levels), fp);
      double max_err = 0, scale = 0;
      for (std::size_t i = 0; i < img.size(); ++i) {
        max_err = std::max(max_err, std::abs(back.v[i] - img.v[i]));
        scale = std::max(scale, std::abs(img.v[i]));
      }
      CAPTURE(name);
      CAPTURE(levels);
      CHECK(max_err / scale < 1e-10);
    }
  }
}

TEST_CASE("transform conserves energy on noise") {
  const FilterPair fp = filter_bank("la8");
  const Image img = seeded_noise(128, 7);
  const Pyramid pyr = dwt2(img, fp, 3);
  CHECK(pyramid_energy(pyr) == doctest::Approx(energy(img.v)).epsilon(1e-9));
}

TEST_CASE("transform is linear") {
  const FilterPair fp = filter_bank("d4");
  const Image x = seeded_noise(32, 1), y = seeded_noise(32, 2);
  Image combo(32);
  for (std::size_t i = 0; i < combo.size(); ++i)
    combo.v[i] = 1.7 * x.v[i] - 0.3 * y.v[i];
  const Pyramid px = dwt2(x, fp, 3), py = dwt2(y, fp, 3), pc = dwt2(combo, fp, 3);
  for (std::size_t b = 0; b < pc.details.size(); ++b)
    for (std::size_t i = 0; i < pc.details[b].v.size(); ++i)
      CHECK(pc.details[b].v[i] ==
            doctest::Approx(1.7 * px.details[b].v[i] - 0.3 * py.details[b].v[i])
                .epsilon(1e-10));
}

TEST_CASE("a single unit coefficient synthesizes the tensor-product atom") {
  const FilterPair fp = filter_bank("la8");
  const int n = 32;
  Pyramid pyr;
  pyr.n = n;
  pyr.levels = 1;
  pyr.details.resize(3);
  for (int u = 1; u <= 3; ++u) pyr.detail(1, u) = Subband(n / 2);
  pyr.scaling = Subband(n / 2);
  pyr.detail(1, 1).at(0, 0) = 1.0;

  const Image atom = idwt2(pyr, fp);
  CHECK(energy(atom.v) == doctest::Approx(1.0).epsilon(1e-10));
  const int L = int(fp.h.size());
  for (int x1 = 0; x1 < n; ++x1)
    for (int x2 = 0; x2 < n; ++x2) {
      const double want =
          (x1 < L && x2 < L) ? fp.h[x1] * fp.h[x2] : 0.0;
      CHECK(atom.at(x1, x2) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("white noise coefficient variance matches the pixel variance") {
  const FilterPair fp = filter_bank("la8");
  const double sigma = 1.7;
  const int n = 256, levels = 3, reps = 12;
  std::vector<double> acc(levels * 3 + 1, 0.0);
  std::vector<std::size_t> cnt(levels * 3 + 1, 0);
  for (int r = 0; r < reps; ++r) {
    const Pyramid pyr = dwt2(seeded_noise(n, 1000 + r, sigma), fp, levels);
    for (int j = 1; j <= levels; ++j)
      for (int u = 1; u <= 3; ++u) {
        const Subband& s = pyr.detail(j, u);
        acc[(j - 1) * 3 + (u - 1)] += energy(s.v);
        cnt[(j - 1) * 3 + (u - 1)] += s.v.size();
      }
    acc[levels * 3] += energy(pyr.scaling.v);
    cnt[levels * 3] += pyr.scaling.v.size();
  }
  for (std::size_t b = 0; b < acc.size(); ++b) {
    REQUIRE(cnt[b] >= 10000u);
    CHECK(acc[b] / double(cnt[b]) ==
          doctest::Approx(sigma * sigma).epsilon(0.05));
  }
}

TEST_CASE("shifts by the coarsest stride permute coefficients") {
  const FilterPair fp = filter_bank("la8");
  const int n = 64, levels = 3, stride = 1 << levels;
  const Image img = seeded_noise(n, 5);
  const Pyramid a = dwt2(img, fp, levels);
  const Pyramid b = dwt2(circular_shift(img, stride, 2 * stride), fp, levels);
  for (int j = 1; j <= levels; ++j) {
    const int dj1 = stride >> j, dj2 = (2 * stride) >> j;
    for (int u = 1; u <= 3; ++u) {
      const Subband& sa = a.detail(j, u);
      const Subband& sb = b.detail(j, u);
      for (int k1 = 0; k1 < sa.size; ++k1)
        for (int k2 = 0; k2 < sa.size; ++k2)
          CHECK(sb.at((k1 + dj1) % sa.size, (k2 + dj2) % sa.size) ==
                doctest::Approx(sa.at(k1, k2)).epsilon(1e-13));
    }
  }
}

TEST_CASE("pyramid file round trip is bit exact") {
  const FilterPair fp = filter_bank("la8");
  const Pyramid pyr = dwt2(seeded_noise(64, 11), fp, 3);
  const std::string path = "tmp_pyramid.hypp";
  save_pyramid(pyr, path);
  const Pyramid r = load_pyramid(path);
  CHECK(r.n == pyr.n);
  CHECK(r.levels == pyr.levels);
  for (std::size_t b = 0; b < pyr.details.size(); ++b)
    CHECK(r.details[b].v == pyr.details[b].v);
  CHECK(r.scaling.v == pyr.scaling.v);
  std::filesystem::remove(path);
}

TEST_CASE("depth precondition is enforced") {
  const FilterPair fp = filter_bank("haar");
  const Image img(16);
  CHECK_THROWS_AS(dwt2(img, fp, 0), std::invalid_argument);
  CHECK_THROWS_AS(dwt2(img, fp, 5), std::invalid_argument);
  CHECK_NOTHROW(dwt2(img, fp, 4));

  Pyramid bad = dwt2(img, fp, 2);
  bad.detail(1, 2) = Subband(4); // wrong size
  CHECK_THROWS_AS(idwt2(bad, fp), std::invalid_argument);
}
