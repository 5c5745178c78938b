#pragma once

// Square dyadic image container plus synthetic feature generators, Gaussian
// noise injection and SNR accounting. Images are value types: n x n doubles,
// row-major with index order [x1][x2] and unit sample step.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypd/rng.hpp"

namespace hypd {

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct Image {
  int n = 0;
  std::vector<double> v; // row-major, v[x1 * n + x2]

  Image() = default;
  explicit Image(int side, double fill = 0.0)
      : n(side), v(static_cast<std::size_t>(side) * side, fill) {
    if (n < 8 || !is_power_of_two(n))
      throw std::invalid_argument("image side must be a power of two >= 8");
  }

  double& at(int x1, int x2) { return v[static_cast<std::size_t>(x1) * n + x2]; }
  double at(int x1, int x2) const { return v[static_cast<std::size_t>(x1) * n + x2]; }
  std::size_t size() const { return v.size(); }
};

struct NoiseSpec {
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

// t[x] = a cos(2 pi f0 (cos(phi0) x1 + sin(phi0) x2)).
// f0 is the frequency magnitude in cycles/sample and must be in (0, 1/2).
inline Image make_oscillation(double amplitude, double f0, double phi0, int n) {
  if (!(f0 > 0.0 && f0 < 0.5))
    throw std::invalid_argument("oscillation frequency must lie in (0, 1/2)");
  Image t(n);
  const double c = std::cos(phi0), s = std::sin(phi0);
  for (int x1 = 0; x1 < n; ++x1)
    for (int x2 = 0; x2 < n; ++x2)
      t.at(x1, x2) = amplitude * std::cos(2.0 * M_PI * f0 * (c * x1 + s * x2));
  return t;
}

// Gaussian ridge of the given width along the line cos(theta) x1 + sin(theta) x2 = c.
// A true line discontinuity cannot be sampled, so the crest profile is
// exp(-d^2 / (2 width^2)) with d the signed distance from the line.
inline Image make_edge(double theta, double c, double amplitude, double width, int n) {
  if (!(theta > 0.0 && theta <= M_PI / 2.0))
    throw std::invalid_argument("edge orientation must lie in (0, pi/2]");
  if (!(width >= 0.5))
    throw std::invalid_argument("edge width must be >= 0.5 samples");
  Image e(n);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double inv = 1.0 / (2.0 * width * width);
  for (int x1 = 0; x1 < n; ++x1)
    for (int x2 = 0; x2 < n; ++x2) {
      const double d = ct * x1 + st * x2 - c;
      e.at(x1, x2) = amplitude * std::exp(-d * d * inv);
    }
  return e;
}

// A handful of smooth bumps; piecewise-smooth content for benchmark images.
inline Image make_blobs(int n) {
  Image b(n);
  struct Bump { double cx, cy, r, a; };
  const Bump bumps[] = {
      {0.28, 0.32, 0.10, 2.0},
      {0.64, 0.25, 0.06, -1.5},
      {0.55, 0.70, 0.16, 1.2},
      {0.20, 0.78, 0.05, 2.5},
  };
  for (int x1 = 0; x1 < n; ++x1)
    for (int x2 = 0; x2 < n; ++x2) {
      double acc = 0.0;
      for (const Bump& p : bumps) {
        const double dx = x1 / double(n) - p.cx;
        const double dy = x2 / double(n) - p.cy;
        acc += p.a * std::exp(-(dx * dx + dy * dy) / (2.0 * p.r * p.r));
      }
      b.at(x1, x2) = acc;
    }
  return b;
}

// Oscillation-plus-ridge test scene for the denoising benchmarks: two
// oscillations at crossed orientations (multi-directional texture) and two
// slanted ridges, none axis-aligned.
inline Image make_composite(int n) {
  Image q = make_oscillation(1.0, 0.14, M_PI / 6.0, n);
  const Image t2 = make_oscillation(1.0, 0.22, 7.0 * M_PI / 18.0, n);
  const Image r1 = make_edge(M_PI / 3.0, 0.55 * n, 3.0, 1.5, n);
  const Image r2 = make_edge(2.0 * M_PI / 5.0, 0.30 * n, 2.4, 1.0, n);
  for (std::size_t i = 0; i < q.size(); ++i)
    q.v[i] += t2.v[i] + r1.v[i] + r2.v[i];
  return q;
}

inline Image add_noise(const Image& img, const NoiseSpec& spec) {
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("noise sigma must be > 0");
  Image out = img;
  Rng rng(spec.seed);
  for (double& x : out.v) x += spec.sigma * rng.next_gaussian();
  return out;
}

// Circular shift: out[x1][x2] = in[(x1 - d1) mod n][(x2 - d2) mod n].
inline Image circular_shift(const Image& img, int d1, int d2) {
  const int n = img.n;
  Image out(n);
  const int s1 = ((d1 % n) + n) % n, s2 = ((d2 % n) + n) % n;
  for (int x1 = 0; x1 < n; ++x1) {
    const int src1 = (x1 - s1 + n) % n;
    for (int x2 = 0; x2 < n; ++x2)
      out.at(x1, x2) = img.at(src1, (x2 - s2 + n) % n);
  }
  return out;
}

inline double snr(const Image& q, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("snr requires sigma > 0");
  double e = 0.0;
  for (double x : q.v) e += x * x;
  return std::sqrt(e / (double(q.size()) * sigma * sigma));
}

inline double sigma_for_snr(const Image& q, double target_snr) {
  if (!(target_snr > 0.0)) throw std::invalid_argument("target snr must be > 0");
  double e = 0.0;
  for (double x : q.v) e += x * x;
  if (e == 0.0) throw std::invalid_argument("cannot calibrate noise for a zero image");
  return std::sqrt(e / double(q.size())) / target_snr;
}

// ---------------------------------------------------------------------------
// File I/O. Two formats:
//  * binary 8-bit PGM (P5, maxval 255); pixel values map to [0,255] floats
//    unscaled, and are clamped+rounded on write;
//  * raw "HYPD" doubles: 16-byte header (magic "HYPD", u32 n, u32 reserved,
//    4 zero bytes), then n*n float64, little-endian, row-major.
// ---------------------------------------------------------------------------

inline void save_raw(const Image& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  char header[16] = {'H', 'Y', 'P', 'D'};
  const std::uint32_t n32 = static_cast<std::uint32_t>(img.n);
  std::memcpy(header + 4, &n32, 4);
  f.write(header, 16);
  f.write(reinterpret_cast<const char*>(img.v.data()),
          static_cast<std::streamsize>(img.v.size() * sizeof(double)));
  if (!f) throw std::runtime_error("short write: " + path);
}

inline Image load_raw(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  char header[16];
  f.read(header, 16);
  if (!f || std::memcmp(header, "HYPD", 4) != 0)
    throw std::runtime_error("not a HYPD image file: " + path);
  std::uint32_t n32;
  std::memcpy(&n32, header + 4, 4);
  Image img(static_cast<int>(n32));
  f.read(reinterpret_cast<char*>(img.v.data()),
         static_cast<std::streamsize>(img.v.size() * sizeof(double)));
  if (!f) throw std::runtime_error("truncated HYPD image file: " + path);
  return img;
}

inline void save_pgm(const Image& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "P5\n" << img.n << " " << img.n << "\n255\n";
  std::vector<unsigned char> row(img.n);
  for (int x1 = 0; x1 < img.n; ++x1) {
    for (int x2 = 0; x2 < img.n; ++x2) {
      double p = std::nearbyint(img.at(x1, x2));
      if (p < 0.0) p = 0.0;
      if (p > 255.0) p = 255.0;
      row[x2] = static_cast<unsigned char>(p);
    }
    f.write(reinterpret_cast<const char*>(row.data()), img.n);
  }
  if (!f) throw std::runtime_error("short write: " + path);
}

inline Image load_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::string magic;
  f >> magic;
  if (magic != "P5") throw std::runtime_error("not a binary PGM (P5) file: " + path);
  auto next_int = [&f, &path]() {
    // skip whitespace and '#' comment lines
    int c = f.peek();
    while (c == '#' || std::isspace(c)) {
      if (c == '#') f.ignore(1 << 20, '\n');
      else f.get();
      c = f.peek();
    }
    long val = -1;
    f >> val;
    if (!f) throw std::runtime_error("malformed PGM header: " + path);
    return val;
  };
  const long w = next_int(), h = next_int(), maxval = next_int();
  if (w != h) throw std::runtime_error("PGM image must be square: " + path);
  if (maxval != 255) throw std::runtime_error("only 8-bit PGM supported: " + path);
  f.get(); // single whitespace after maxval
  Image img(static_cast<int>(w));
  std::vector<unsigned char> row(img.n);
  for (int x1 = 0; x1 < img.n; ++x1) {
    f.read(reinterpret_cast<char*>(row.data()), img.n);
    if (!f) throw std::runtime_error("truncated PGM file: " + path);
    for (int x2 = 0; x2 < img.n; ++x2) img.at(x1, x2) = double(row[x2]);
  }
  return img;
}

// Dispatch by extension: ".pgm" is PGM, everything else the raw format.
inline bool has_pgm_extension(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".pgm") == 0;
}

inline Image load_image(const std::string& path) {
  return has_pgm_extension(path) ? load_pgm(path) : load_raw(path);
}

inline void save_image(const Image& img, const std::string& path) {
  if (has_pgm_extension(path)) save_pgm(img, path);
  else save_raw(img, path);
}

} // namespace hypd
