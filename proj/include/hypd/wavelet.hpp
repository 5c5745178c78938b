#pragma once

// Orthonormal filter banks and the periodized separable 2-D DWT.
//
// Analysis convention: circular correlation against the filter with the
// downsampler keeping even phases,
//   a[k] = sum_l g[l] x[(2k+l) mod m],   d[k] = sum_l h[l] x[(2k+l) mod m];
// synthesis is the exact transpose. Subband index u at level j:
//   u=1: wavelet along both axes        u=2: wavelet along x1, scaling x2
//   u=3: scaling along x1, wavelet x2   u=4/scaling: scaling along both.

#include <array>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypd/image.hpp"

namespace hypd {

struct FilterPair {
  std::string name;
  std::vector<double> g; // scaling filter
  std::vector<double> h; // wavelet filter, h[l] = (-1)^l g[L-1-l]
};

inline FilterPair filter_bank(const std::string& name) {
  std::vector<double> g;
  if (name == "haar") {
    g = {0.7071067811865475244008444, 0.7071067811865475244008444};
  } else if (name == "d4") {
    const double s3 = 1.7320508075688772935274463;
    const double c = 1.0 / (4.0 * 1.4142135623730950488016887);
    g = {(1.0 + s3) * c, (3.0 + s3) * c, (3.0 - s3) * c, (1.0 - s3) * c};
  } else if (name == "la8") {
    // Daubechies least-asymmetric, 8 taps (symmlet-4). Published values,
    // refined so the orthonormality identities hold to double precision.
    g = {-0.07576571478900348859, -0.02963552764594251048, 0.49761866763210465541,
         0.80373875180552261131,   0.29785779560545096843, -0.09921954357686891290,
         -0.01260396726200461085,  0.03222310060383633647};
  } else {
    throw std::invalid_argument("unknown filter bank: " + name);
  }
  FilterPair fp;
  fp.name = name;
  fp.g = g;
  fp.h.resize(g.size());
  const int L = static_cast<int>(g.size());
  for (int l = 0; l < L; ++l)
    fp.h[l] = ((l % 2) ? -1.0 : 1.0) * g[L - 1 - l];
  return fp;
}

struct Subband {
  int size = 0;
  std::vector<double> v; // row-major size x size

  Subband() = default;
  explicit Subband(int s) : size(s), v(static_cast<std::size_t>(s) * s, 0.0) {}
  double& at(int k1, int k2) { return v[static_cast<std::size_t>(k1) * size + k2]; }
  double at(int k1, int k2) const { return v[static_cast<std::size_t>(k1) * size + k2]; }
};

// Full coefficient set of a depth-J decomposition: detail subbands u=1..3 per
// level plus the level-J scaling block. Total coefficient count is n^2.
struct Pyramid {
  int n = 0;
  int levels = 0;
  std::vector<Subband> details; // index (j-1)*3 + (u-1), u in 1..3
  Subband scaling;

  Subband& detail(int j, int u) { return details[(j - 1) * 3 + (u - 1)]; }
  const Subband& detail(int j, int u) const { return details[(j - 1) * 3 + (u - 1)]; }

  std::size_t coefficient_count() const {
    std::size_t total = scaling.v.size();
    for (const Subband& s : details) total += s.v.size();
    return total;
  }
};

namespace detail {

// One analysis step along a strided 1-D signal of even length m.
inline void analyze_step(const double* x, int m, int stride, const FilterPair& fp,
                         double* approx, double* det, int out_stride) {
  const int L = static_cast<int>(fp.g.size());
  const int half = m / 2;
  for (int k = 0; k < half; ++k) {
    double a = 0.0, d = 0.0;
    const int base = 2 * k;
    if (base + L <= m) {
      const double* p = x + std::size_t(base) * stride;
      for (int l = 0; l < L; ++l) {
        const double xv = p[std::size_t(l) * stride];
        a += fp.g[l] * xv;
        d += fp.h[l] * xv;
      }
    } else {
      for (int l = 0; l < L; ++l) {
        const double xv = x[std::size_t((base + l) % m) * stride];
        a += fp.g[l] * xv;
        d += fp.h[l] * xv;
      }
    }
    approx[std::size_t(k) * out_stride] = a;
    det[std::size_t(k) * out_stride] = d;
  }
}

// Transpose of analyze_step.
inline void synthesize_step(const double* approx, const double* det, int half,
                            int in_stride, const FilterPair& fp, double* x,
                            int stride) {
  const int L = static_cast<int>(fp.g.size());
  const int m = 2 * half;
  for (int i = 0; i < m; ++i) x[std::size_t(i) * stride] = 0.0;
  for (int k = 0; k < half; ++k) {
    const double a = approx[std::size_t(k) * in_stride];
    const double d = det[std::size_t(k) * in_stride];
    const int base = 2 * k;
    if (base + L <= m) {
      double* p = x + std::size_t(base) * stride;
      for (int l = 0; l < L; ++l)
        p[std::size_t(l) * stride] += fp.g[l] * a + fp.h[l] * d;
    } else {
      for (int l = 0; l < L; ++l)
        x[std::size_t((base + l) % m) * stride] += fp.g[l] * a + fp.h[l] * d;
    }
  }
}

} // namespace detail

inline Pyramid dwt2(const Image& img, const FilterPair& fp, int levels) {
  const int n = img.n;
  int max_levels = 0;
  for (int m = n; m > 1; m /= 2) ++max_levels;
  if (levels < 1 || levels > max_levels)
    throw std::invalid_argument("decomposition depth out of range");

  Pyramid pyr;
  pyr.n = n;
  pyr.levels = levels;
  pyr.details.resize(static_cast<std::size_t>(levels) * 3);

  std::vector<double> cur = img.v;
  std::vector<double> tmp, col_in, col_a, col_d;
  for (int j = 1; j <= levels; ++j) {
    const int m = n >> (j - 1);
    const int half = m / 2;
    // pass along x2 (contiguous rows): tmp holds [approx | detail] per row
    tmp.assign(std::size_t(m) * m, 0.0);
    for (int r = 0; r < m; ++r)
      detail::analyze_step(cur.data() + std::size_t(r) * m, m, 1, fp,
                           tmp.data() + std::size_t(r) * m,
                           tmp.data() + std::size_t(r) * m + half, 1);
    // pass along x1 (columns of tmp)
    col_in.resize(m);
    col_a.resize(half);
    col_d.resize(half);
    Subband ll(half), lh(half), hl(half), hh(half);
    for (int c = 0; c < m; ++c) {
      for (int r = 0; r < m; ++r) col_in[r] = tmp[std::size_t(r) * m + c];
      detail::analyze_step(col_in.data(), m, 1, fp, col_a.data(), col_d.data(), 1);
      const bool right = c >= half;          // detail along x2
      const int cc = right ? c - half : c;
      for (int r = 0; r < half; ++r) {
        if (right) {
          lh.at(r, cc) = col_a[r]; // scaling x1, wavelet x2 -> u=3
          hh.at(r, cc) = col_d[r]; // wavelet both -> u=1
        } else {
          ll.at(r, cc) = col_a[r];
          hl.at(r, cc) = col_d[r]; // wavelet x1, scaling x2 -> u=2
        }
      }
    }
    pyr.detail(j, 1) = std::move(hh);
    pyr.detail(j, 2) = std::move(hl);
    pyr.detail(j, 3) = std::move(lh);
    if (j == levels) {
      pyr.scaling = std::move(ll);
    } else {
      cur = std::move(ll.v);
    }
  }
  return pyr;
}

inline Image idwt2(const Pyramid& pyr, const FilterPair& fp) {
  const int n = pyr.n;
  if (pyr.details.size() != std::size_t(pyr.levels) * 3 ||
      pyr.scaling.size != (n >> pyr.levels))
    throw std::invalid_argument("malformed pyramid");
  for (int j = 1; j <= pyr.levels; ++j)
    for (int u = 1; u <= 3; ++u)
      if (pyr.detail(j, u).size != (n >> j))
        throw std::invalid_argument("malformed pyramid subband");

  std::vector<double> cur = pyr.scaling.v;
  std::vector<double> tmp, merged, col_out;
  for (int j = pyr.levels; j >= 1; --j) {
    const int half = n >> j;
    const int m = 2 * half;
    const Subband& hh = pyr.detail(j, 1);
    const Subband& hl = pyr.detail(j, 2);
    const Subband& lh = pyr.detail(j, 3);
    // invert the x1 pass: columns of the [approx | detail]-per-row layout
    tmp.assign(std::size_t(m) * m, 0.0);
    col_out.resize(m);
    std::vector<double> a(half), d(half);
    for (int c = 0; c < m; ++c) {
      const bool right = c >= half;
      const int cc = right ? c - half : c;
      for (int r = 0; r < half; ++r) {
        a[r] = right ? lh.at(r, cc) : cur[std::size_t(r) * half + cc];
        d[r] = right ? hh.at(r, cc) : hl.at(r, cc);
      }
      detail::synthesize_step(a.data(), d.data(), half, 1, fp, col_out.data(), 1);
      for (int r = 0; r < m; ++r) tmp[std::size_t(r) * m + c] = col_out[r];
    }
    // invert the x2 pass
    merged.assign(std::size_t(m) * m, 0.0);
    for (int r = 0; r < m; ++r)
      detail::synthesize_step(tmp.data() + std::size_t(r) * m,
                              tmp.data() + std::size_t(r) * m + half, half, 1, fp,
                              merged.data() + std::size_t(r) * m, 1);
    cur = std::move(merged);
  }
  Image out(n);
  out.v = std::move(cur);
  return out;
}

// ---------------------------------------------------------------------------
// Pyramid serialization: 16-byte header (magic "HYPP", u32 n, u32 J, 4 zero
// bytes) followed by subbands j=1..J, u=1..3 row-major, then the scaling
// block; all doubles little-endian.
// ---------------------------------------------------------------------------

inline void save_pyramid(const Pyramid& pyr, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  char header[16] = {'H', 'Y', 'P', 'P'};
  const std::uint32_t n32 = static_cast<std::uint32_t>(pyr.n);
  const std::uint32_t j32 = static_cast<std::uint32_t>(pyr.levels);
  std::memcpy(header + 4, &n32, 4);
  std::memcpy(header + 8, &j32, 4);
  f.write(header, 16);
  auto write_block = [&f](const Subband& s) {
    f.write(reinterpret_cast<const char*>(s.v.data()),
            static_cast<std::streamsize>(s.v.size() * sizeof(double)));
  };
  for (int j = 1; j <= pyr.levels; ++j)
    for (int u = 1; u <= 3; ++u) write_block(pyr.detail(j, u));
  write_block(pyr.scaling);
  if (!f) throw std::runtime_error("short write: " + path);
}

inline Pyramid load_pyramid(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  char header[16];
  f.read(header, 16);
  if (!f || std::memcmp(header, "HYPP", 4) != 0)
    throw std::runtime_error("not a HYPP pyramid file: " + path);
  std::uint32_t n32, j32;
  std::memcpy(&n32, header + 4, 4);
  std::memcpy(&j32, header + 8, 4);
  Pyramid pyr;
  pyr.n = static_cast<int>(n32);
  pyr.levels = static_cast<int>(j32);
  if (pyr.n < 8 || !is_power_of_two(pyr.n) || pyr.levels < 1)
    throw std::runtime_error("malformed HYPP header: " + path);
  pyr.details.resize(std::size_t(pyr.levels) * 3);
  auto read_block = [&f, &path](Subband& s, int size) {
    s = Subband(size);
    f.read(reinterpret_cast<char*>(s.v.data()),
           static_cast<std::streamsize>(s.v.size() * sizeof(double)));
    if (!f) throw std::runtime_error("truncated HYPP pyramid file: " + path);
  };
  for (int j = 1; j <= pyr.levels; ++j)
    for (int u = 1; u <= 3; ++u) read_block(pyr.detail(j, u), pyr.n >> j);
  read_block(pyr.scaling, pyr.n >> pyr.levels);
  return pyr;
}

} // namespace hypd
