#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hypd/image.hpp"

using namespace hypd;

TEST_CASE("oscillation generator evaluates the cosine field") {
  const Image t = make_oscillation(1.0, 0.1, 0.7, 64);
  CHECK(t.at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));

  const Image z = make_oscillation(0.0, 0.3, 1.0, 64);
  for (double x : z.v) CHECK(x == 0.0);

  // f0=1/4 along x1: value at x1=2 is 2 cos(pi) = -2 for every x2
  const Image o = make_oscillation(2.0, 0.25, 0.0, 64);
  for (int x2 = 0; x2 < o.n; ++x2)
    CHECK(o.at(2, x2) == doctest::Approx(-2.0).epsilon(1e-12));

  CHECK_THROWS_AS(make_oscillation(1.0, 0.5, 0.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(make_oscillation(1.0, 0.0, 0.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(make_oscillation(1.0, -0.1, 0.0, 64), std::invalid_argument);
}

TEST_CASE("ridge generator evaluates the gaussian profile") {
  const Image e = make_edge(M_PI / 2, 10.0, 1.0, 1.0, 32);
  for (int x1 = 0; x1 < e.n; ++x1) {
    CHECK(e.at(x1, 10) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.at(x1, 13) == doctest::Approx(std::exp(-4.5)).epsilon(1e-12));
  }

  const Image z = make_edge(1.0, 5.0, 0.0, 2.0, 32);
  for (double x : z.v) CHECK(x == 0.0);

  CHECK_THROWS_AS(make_edge(0.0, 5.0, 1.0, 1.0, 32), std::invalid_argument);
  CHECK_THROWS_AS(make_edge(1.0, 5.0, 1.0, 0.4, 32), std::invalid_argument);
}

TEST_CASE("noise injection is additive, deterministic and calibrated") {
  const int n = 256;
  const Image q = make_oscillation(2.0, 0.2, 0.3, n);
  const NoiseSpec spec{3.0, 1234567};

  const Image y1 = add_noise(q, spec);
  const Image y2 = add_noise(q, spec);
  CHECK(y1.v == y2.v);

  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) mean += y1.v[i] - q.v[i];
  mean /= double(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double d = y1.v[i] - q.v[i] - mean;
    var += d * d;
  }
  var /= double(q.size() - 1);
  CHECK(std::abs(mean) < 4.0 * spec.sigma / n);
  CHECK(var == doctest::Approx(spec.sigma * spec.sigma).epsilon(0.05));

  CHECK_THROWS_AS(add_noise(q, NoiseSpec{0.0, 1}), std::invalid_argument);
}

TEST_CASE("snr definition and inversion") {
  Image z(16);
  CHECK(snr(z, 2.0) == 0.0);

  Image c(16, 3.5);
  CHECK(snr(c, 3.5) == doctest::Approx(1.0).epsilon(1e-15));

  Image two(16, 2.0);
  CHECK(snr(two, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(snr(two, 0.0), std::invalid_argument);

  Image one(16, 1.0);
  CHECK(sigma_for_snr(one, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  Image four(16, 4.0);
  CHECK(sigma_for_snr(four, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(sigma_for_snr(z, 1.0), std::invalid_argument);

  const Image q = make_oscillation(1.3, 0.12, 1.1, 64);
  for (double target : {0.5, 2.0, 8.0}) {
    const double sg = sigma_for_snr(q, target);
    CHECK(snr(q, sg) == doctest::Approx(target).epsilon(1e-12));
  }

  // scale covariance
  Image scaled = q;
  for (double& x : scaled.v) x *= -2.5;
  CHECK(snr(scaled, 0.7) == doctest::Approx(2.5 * snr(q, 0.7)).epsilon(1e-12));
}

TEST_CASE("circular shift round trip") {
  const Image q = make_oscillation(1.0, 0.17, 0.4, 32);
  const Image s = circular_shift(q, 5, -9);
  CHECK(s.at(5, (32 - 9) % 32) == q.at(0, 0));
  const Image back = circular_shift(s, -5, 9);
  CHECK(back.v == q.v);
}

TEST_CASE("raw image file round trip is bit exact") {
  const Image q = add_noise(make_blobs(32), NoiseSpec{1.0, 99});
  const std::string path = "tmp_image_roundtrip.hypd";
  save_raw(q, path);
  const Image r = load_raw(path);
  CHECK(r.n == q.n);
  CHECK(r.v == q.v);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_raw("does_not_exist.hypd"), std::runtime_error);
}

TEST_CASE("pgm image file round trip preserves 8-bit content") {
  Image q(32);
  Rng rng(7);
  for (double& x : q.v) x = double(rng.next_u64() % 256);
  const std::string path = "tmp_image_roundtrip.pgm";
  save_pgm(q, path);
  const Image r = load_pgm(path);
  CHECK(r.v == q.v);
  std::filesystem::remove(path);
}
