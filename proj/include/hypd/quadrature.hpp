#pragma once

// DFT-domain construction of quadrature components: images orthogonal to the
// input that carry the same energy band-by-band. Two families:
//
//  * riesz: frequency response -i f_l / |f| per component, two components,
//    combined energy constant C = 1;
//  * hypercomplex: partial Hilbert transforms along each axis and their
//    composition (-i / +i by frequency half-plane), three components, C = 3.
//
// All multipliers are Hermitian-symmetric so real images map to real images.
// Frequencies with no consistent Hermitian completion are zeroed: for the
// Riesz family the four self-conjugate grid points, for the hypercomplex
// family the whole u_l = 0 and u_l = n/2 lines of the component axis. On the
// remaining Riesz Nyquist lines the sign of the Nyquist frequency is taken
// from the other coordinate, which keeps both the symmetry and the energy
// identity exact there.

#include <complex>
#include <stdexcept>
#include <vector>

#include "hypd/fft.hpp"
#include "hypd/image.hpp"

namespace hypd {

enum class Family { riesz, hypercomplex };

inline const char* family_name(Family f) {
  return f == Family::riesz ? "riesz" : "hct";
}

inline int family_component_count(Family f) {
  return f == Family::riesz ? 2 : 3;
}

inline double family_energy_constant(Family f) {
  return f == Family::riesz ? 1.0 : 3.0;
}

struct SpectralFilter {
  int n = 0;
  std::vector<cplx> v; // row-major over DFT indices (u1, u2)

  explicit SpectralFilter(int side)
      : n(side), v(static_cast<std::size_t>(side) * side, cplx(0.0, 0.0)) {}
  cplx& at(int u1, int u2) { return v[static_cast<std::size_t>(u1) * n + u2]; }
  cplx at(int u1, int u2) const { return v[static_cast<std::size_t>(u1) * n + u2]; }
};

namespace detail {

inline bool self_conjugate_coord(int u, int n) { return u == 0 || u == n / 2; }

// Signed frequency of DFT index u; at Nyquist the sign is borrowed from the
// other coordinate so that negating the index pair flips the result.
inline double signed_freq(int u, int n, int other) {
  if (u == 0) return 0.0;
  if (u == n / 2) {
    if (self_conjugate_coord(other, n)) return 0.5; // zeroed by caller anyway
    return other < n / 2 ? 0.5 : -0.5;
  }
  return (u <= n / 2 ? u : u - n) / static_cast<double>(n);
}

} // namespace detail

inline SpectralFilter riesz_filter(int n, int l) {
  if (l != 1 && l != 2) throw std::invalid_argument("riesz component must be 1 or 2");
  if (n % 2 != 0) throw std::invalid_argument("riesz filter needs even side");
  SpectralFilter out(n);
  for (int u1 = 0; u1 < n; ++u1)
    for (int u2 = 0; u2 < n; ++u2) {
      if (detail::self_conjugate_coord(u1, n) && detail::self_conjugate_coord(u2, n))
        continue; // stays 0
      const double f1 = detail::signed_freq(u1, n, u2);
      const double f2 = detail::signed_freq(u2, n, u1);
      const double mag = std::sqrt(f1 * f1 + f2 * f2);
      const double fl = (l == 1) ? f1 : f2;
      out.at(u1, u2) = cplx(0.0, -fl / mag);
    }
  return out;
}

inline SpectralFilter hct_filter(int n, int l) {
  if (l < 1 || l > 3) throw std::invalid_argument("hct component must be 1, 2 or 3");
  if (n % 2 != 0) throw std::invalid_argument("hct filter needs even side");
  SpectralFilter out(n);
  auto axis_value = [n](int u) -> cplx {
    if (u == 0 || u == n / 2) return cplx(0.0, 0.0);
    return u < n / 2 ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
  };
  for (int u1 = 0; u1 < n; ++u1)
    for (int u2 = 0; u2 < n; ++u2) {
      switch (l) {
        case 1: out.at(u1, u2) = axis_value(u1); break;
        case 2: out.at(u1, u2) = axis_value(u2); break;
        case 3: out.at(u1, u2) = axis_value(u1) * axis_value(u2); break;
      }
    }
  return out;
}

struct QuadratureSet {
  Family family = Family::riesz;
  std::vector<Image> components; // components[0] is the input image itself
  double energy_constant = 1.0;
};

// Spectral multiplication followed by the inverse DFT. The result of a
// Hermitian multiplier on a real image is real up to roundoff; anything above
// max_imag_tol times the image scale indicates a symmetry bug and throws.
inline Image apply_spectral_filter(const std::vector<cplx>& spectrum,
                                   const SpectralFilter& filter,
                                   double max_imag_tol = 1e-6) {
  const int n = filter.n;
  std::vector<cplx> prod(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) prod[i] = spectrum[i] * filter.v[i];
  const std::vector<cplx> back = idft2(std::move(prod), n);
  double scale = 1.0, max_imag = 0.0;
  for (const cplx& z : back) {
    if (std::abs(z.real()) > scale) scale = std::abs(z.real());
    if (std::abs(z.imag()) > max_imag) max_imag = std::abs(z.imag());
  }
  if (max_imag > max_imag_tol * scale)
    throw std::runtime_error("spectral filter broke Hermitian symmetry");
  Image out(n);
  for (std::size_t i = 0; i < back.size(); ++i) out.v[i] = back[i].real();
  return out;
}

inline QuadratureSet quadrature_set(const Image& img, Family family) {
  QuadratureSet qs;
  qs.family = family;
  qs.energy_constant = family_energy_constant(family);
  qs.components.push_back(img);
  const std::vector<cplx> spec = dft2(img);
  const int count = family_component_count(family);
  for (int l = 1; l <= count; ++l) {
    const SpectralFilter f = (family == Family::riesz) ? riesz_filter(img.n, l)
                                                       : hct_filter(img.n, l);
    qs.components.push_back(apply_spectral_filter(spec, f));
  }
  return qs;
}

// Projection of img onto the frequencies where the family's filters carry
// full energy (the complement of their zero set). On this subspace the
// combined component energy equals C times the image energy exactly.
inline Image band_restrict(const Image& img, Family family) {
  const int n = img.n;
  std::vector<cplx> spec = dft2(img);
  for (int u1 = 0; u1 < n; ++u1)
    for (int u2 = 0; u2 < n; ++u2) {
      bool zero;
      if (family == Family::riesz)
        zero = detail::self_conjugate_coord(u1, n) && detail::self_conjugate_coord(u2, n);
      else
        zero = detail::self_conjugate_coord(u1, n) || detail::self_conjugate_coord(u2, n);
      if (zero) spec[static_cast<std::size_t>(u1) * n + u2] = cplx(0.0, 0.0);
    }
  const std::vector<cplx> back = idft2(std::move(spec), n);
  Image out(n);
  for (std::size_t i = 0; i < back.size(); ++i) out.v[i] = back[i].real();
  return out;
}

} // namespace hypd
