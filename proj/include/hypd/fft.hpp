#pragma once

// Radix-2 complex FFT and the 2-D DFT pair used for the quadrature filters.
// Convention: forward transform unnormalized, inverse carries 1/n per axis.

#include <complex>
#include <stdexcept>
#include <vector>

#include "hypd/image.hpp"

namespace hypd {

using cplx = std::complex<double>;

namespace detail {

// In-place iterative Cooley-Tukey on data[0..n) with the given stride.
inline void fft_pow2(cplx* data, int n, int stride, bool inverse) {
  // bit reversal
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i * stride], data[j * stride]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / len;
    const cplx wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        cplx& u = data[(i + k) * stride];
        cplx& v = data[(i + k + len / 2) * stride];
        const cplx t = v * w;
        v = u - t;
        u += t;
        w *= wl;
      }
    }
  }
}

inline void fft2_inplace(std::vector<cplx>& a, int n, bool inverse) {
  for (int r = 0; r < n; ++r) fft_pow2(a.data() + std::size_t(r) * n, n, 1, inverse);
  for (int c = 0; c < n; ++c) fft_pow2(a.data() + c, n, n, inverse);
  if (inverse) {
    const double s = 1.0 / (double(n) * double(n));
    for (cplx& z : a) z *= s;
  }
}

} // namespace detail

inline std::vector<cplx> dft2(const Image& img) {
  std::vector<cplx> a(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) a[i] = img.v[i];
  detail::fft2_inplace(a, img.n, false);
  return a;
}

inline std::vector<cplx> idft2(std::vector<cplx> spec, int n) {
  if (spec.size() != std::size_t(n) * n)
    throw std::invalid_argument("spectrum size does not match side length");
  detail::fft2_inplace(spec, n, true);
  return spec;
}

} // namespace hypd
