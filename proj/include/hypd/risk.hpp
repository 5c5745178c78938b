#pragma once

// Standardized per-coefficient risk of the keep/kill rule,
//   R_theta(lambda) = E[(hat{mu}_1 - mu_1)^2] / sigma^2,
// where the coefficient vector W ~ N(theta, diag(sigma_l^2)) in noise units
// is kept iff sum_l W_l^2 >= lambda^2 and the estimate is W_1 or 0.
//
// Three routes are provided: deterministic cubature of the risk integral
//   R = 1 + int_{sum_l (w_l + theta_l)^2 < lambda^2} (theta_1^2 - w_1^2)
//         prod_l phi(w_l / sigma_l) / sigma_l dw,
// closed forms at theta = 0, and an independent Monte Carlo oracle.

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypd/noise_stats.hpp"
#include "hypd/numeric.hpp"
#include "hypd/rng.hpp"

namespace hypd {

enum class RiskMethod { classic, analytic, riesz_equal, riesz_split, hypercomplex };

inline RiskMethod risk_method_from_string(const std::string& s) {
  if (s == "c") return RiskMethod::classic;
  if (s == "a") return RiskMethod::analytic;
  if (s == "r1") return RiskMethod::riesz_equal;
  if (s == "r2") return RiskMethod::riesz_split;
  if (s == "h") return RiskMethod::hypercomplex;
  throw std::invalid_argument("unknown risk method: " + s +
                              " (expected c, a, r1, r2 or h)");
}

inline const char* risk_method_name(RiskMethod m) {
  switch (m) {
    case RiskMethod::classic: return "c";
    case RiskMethod::analytic: return "a";
    case RiskMethod::riesz_equal: return "r1";
    case RiskMethod::riesz_split: return "r2";
    default: return "h";
  }
}

inline int risk_method_dim(RiskMethod m) {
  switch (m) {
    case RiskMethod::classic: return 1;
    case RiskMethod::analytic: return 2;
    case RiskMethod::riesz_equal:
    case RiskMethod::riesz_split: return 3;
    default: return 4;
  }
}

// Component standard deviations in noise units.
inline std::vector<double> risk_method_sigmas(RiskMethod m) {
  switch (m) {
    case RiskMethod::classic: return {1.0};
    case RiskMethod::analytic: return {1.0, 1.0};
    case RiskMethod::riesz_equal: {
      const double r = std::sqrt(0.5);
      return {1.0, r, r};
    }
    case RiskMethod::riesz_split: {
      const double a = riesz_variance_constants().fraction[2];
      return {1.0, std::sqrt(a), std::sqrt(1.0 - a)};
    }
    default: return {1.0, 1.0, 1.0, 1.0};
  }
}

struct RiskSpec {
  RiskMethod method = RiskMethod::classic;
  std::vector<double> theta; // length matching the method's dimension
  double lambda = 0.0;

  void validate() const {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (int(theta.size()) != risk_method_dim(method))
      throw std::invalid_argument("theta length does not match method");
  }
};

struct RiskEval {
  double value = 0.0;
  double error = 0.0; // achieved cubature error estimate (0 for closed forms)
};

namespace detail {

// The kill region {sum_l (w_l)^2 < lambda^2} factorizes: conditioning on the
// coefficient dimension w_1, the quadrature dimensions contribute the
// probability that an independent Gaussian vector lands in the remaining
// ball slice. That probability is closed-form (methods c, a), a noncentral
// chi-square CDF (r1, h), or a single 1-D integral (r2), so the risk needs
// one outer adaptive integral at most two levels deep.

// P(sum_{l>=2} V_l^2 <= s) with V_l ~ N(theta_l, sigma_l^2).
struct QuadSliceProb {
  RiskMethod method;
  std::vector<double> theta; // full mean vector, component 0 unused here
  std::vector<double> sigma;
  double tol;

  double operator()(double s) const {
    if (s <= 0.0) return 0.0;
    switch (method) {
      case RiskMethod::classic:
        return 1.0;
      case RiskMethod::analytic: {
        const double r = std::sqrt(s);
        return normal_cdf(r - theta[1]) - normal_cdf(-r - theta[1]);
      }
      case RiskMethod::riesz_equal: {
        // two components with variance 1/2 each
        const double ncp = 2.0 * (theta[1] * theta[1] + theta[2] * theta[2]);
        return noncentral_chisq_cdf(2.0 * s, 2, ncp);
      }
      case RiskMethod::hypercomplex: {
        const double ncp = theta[1] * theta[1] + theta[2] * theta[2] +
                           theta[3] * theta[3];
        return noncentral_chisq_cdf(s, 3, ncp);
      }
      default: { // riesz_split: unequal variances, one nested integral
        const double r = std::sqrt(s);
        const double s2 = sigma[1], s3 = sigma[2];
        const double t2 = theta[1], t3 = theta[2];
        const QuadResult q = integrate(
            [&](double v) {
              const double rem = std::sqrt(std::max(0.0, s - v * v));
              return normal_pdf((v - t2) / s2) / s2 *
                     (normal_cdf((rem - t3) / s3) - normal_cdf((-rem - t3) / s3));
            },
            -r, r, tol);
        return q.value;
      }
    }
  }
};

} // namespace detail

inline RiskEval risk(const RiskSpec& spec, double abs_tol = 1e-7) {
  spec.validate();
  if (spec.lambda == 0.0) return {1.0, 0.0};
  const double lambda2 = spec.lambda * spec.lambda;
  const double theta1 = spec.theta[0];
  detail::QuadSliceProb slice{spec.method, spec.theta, risk_method_sigmas(spec.method),
                              abs_tol * 0.05};
  // integrand over w_1 (shifted so the ball is centered): at v = w_1 + theta_1,
  // (theta_1^2 - w_1^2) phi(w_1) * P(quadrature part inside the slice).
  auto f = [&](double v) {
    const double w = v - theta1;
    return (theta1 * theta1 - w * w) * normal_pdf(w) *
           slice(lambda2 - v * v);
  };
  const QuadResult q = integrate(f, -spec.lambda, spec.lambda, abs_tol);
  return {1.0 + q.value, q.error + abs_tol * 0.1};
}

// theta = 0 closed forms, i.e. the second moment of the kept noise.
//   c : E[W^2; W^2 >= l^2]           = erfc(l/sqrt2) + sqrt(2/pi) l e^{-l^2/2}
//   a : kill region is a disc        = e^{-l^2/2} (1 + l^2/2)
//   h : kill region is a 4-ball      = e^{-l^2/2} (1 + l^2/2 + l^4/8)
//   r1: W1^2 + Exp(1) in the rule    = erfc(l/sqrt2)
//         + sqrt(2/pi) e^{-l^2/2} (2l - sqrt2 * D(l/sqrt2)),
//       with D(s) = integral_0^s e^{w^2 - s^2} dw the scaled Dawson integral.
// The riesz split case has no closed form and is rejected with guidance to
// use risk().
inline double risk_zero(RiskMethod m, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  const double l2 = lambda * lambda;
  const double decay = std::exp(-0.5 * l2);
  const double sqrt_2_pi = 0.7978845608028653558799; // sqrt(2/pi)
  switch (m) {
    case RiskMethod::classic:
      return std::erfc(lambda * 0.7071067811865475244) + sqrt_2_pi * lambda * decay;
    case RiskMethod::analytic:
      return decay * (1.0 + 0.5 * l2);
    case RiskMethod::hypercomplex:
      return decay * (1.0 + 0.5 * l2 + 0.125 * l2 * l2);
    case RiskMethod::riesz_equal:
      return std::erfc(lambda * 0.7071067811865475244) +
             sqrt_2_pi * decay *
                 (2.0 * lambda -
                  std::sqrt(2.0) *
                      detail::dawson_scaled(lambda * 0.7071067811865475244));
    default:
      throw std::invalid_argument(
          "no closed form for the split riesz case at theta = 0; use risk()");
  }
}

struct RiskMc {
  double estimate = 0.0;
  double stderr_est = 0.0;
};

inline RiskMc risk_mc(const RiskSpec& spec, std::size_t nsamples,
                      std::uint64_t seed) {
  spec.validate();
  if (nsamples < 10000)
    throw std::invalid_argument("need at least 1e4 Monte Carlo samples");
  const std::vector<double> sigma = risk_method_sigmas(spec.method);
  const int dim = risk_method_dim(spec.method);
  const double lambda2 = spec.lambda * spec.lambda;
  Rng rng(seed);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < nsamples; ++i) {
    double w1 = 0.0, total = 0.0;
    for (int l = 0; l < dim; ++l) {
      const double w = spec.theta[l] + sigma[l] * rng.next_gaussian();
      if (l == 0) w1 = w;
      total += w * w;
    }
    const double est = (total >= lambda2) ? w1 : 0.0; // ties kept
    const double errsq = (est - spec.theta[0]) * (est - spec.theta[0]);
    sum += errsq;
    sum2 += errsq * errsq;
  }
  const double mean = sum / double(nsamples);
  const double var = std::max(0.0, sum2 / double(nsamples) - mean * mean);
  return {mean, std::sqrt(var / double(nsamples))};
}

// ---------------------------------------------------------------------------
// Risk curves over |theta| profiles.
// ---------------------------------------------------------------------------

enum class RiskProfile { fig2a, fig2b, fig2c, fig2d };

inline RiskProfile risk_profile_from_string(const std::string& s) {
  if (s == "fig2a") return RiskProfile::fig2a;
  if (s == "fig2b") return RiskProfile::fig2b;
  if (s == "fig2c") return RiskProfile::fig2c;
  if (s == "fig2d") return RiskProfile::fig2d;
  throw std::invalid_argument("unknown risk profile: " + s);
}

inline const char* risk_profile_name(RiskProfile p) {
  switch (p) {
    case RiskProfile::fig2a: return "fig2a";
    case RiskProfile::fig2b: return "fig2b";
    case RiskProfile::fig2c: return "fig2c";
    default: return "fig2d";
  }
}

// Map |theta| to the method's mean vector.
//   fig2a: 1-D tilt at pi/4 (analytic comparison); c and a only.
//   fig2b: equal means; component 1 gets |theta|/sqrt(2), quadrature
//          components share the same magnitude.
//   fig2c: all quadrature means zero.
//   fig2d: tilt at 3pi/8 between component 1 and the quadrature set.
inline std::vector<double> risk_profile_theta(RiskProfile p, RiskMethod m,
                                              double theta_abs) {
  const double rt = theta_abs / std::sqrt(2.0);
  switch (p) {
    case RiskProfile::fig2a: {
      if (m == RiskMethod::classic) return {rt};
      if (m == RiskMethod::analytic) return {rt, rt};
      throw std::invalid_argument("profile fig2a applies to methods c and a");
    }
    case RiskProfile::fig2b:
      switch (m) {
        case RiskMethod::classic: return {rt};
        case RiskMethod::analytic: return {rt, rt};
        case RiskMethod::riesz_equal:
        case RiskMethod::riesz_split:
          return {rt, 0.5 * theta_abs, 0.5 * theta_abs};
        default: return {rt, rt, rt, rt};
      }
    case RiskProfile::fig2c:
      switch (m) {
        case RiskMethod::classic: return {theta_abs};
        case RiskMethod::analytic: return {theta_abs, 0.0};
        case RiskMethod::riesz_equal:
        case RiskMethod::riesz_split:
          return {theta_abs, 0.0, 0.0};
        default: return {rt, rt, 0.0, 0.0};
      }
    default: { // fig2d
      const double c = std::cos(3.0 * M_PI / 8.0), s = std::sin(3.0 * M_PI / 8.0);
      switch (m) {
        case RiskMethod::classic: return {theta_abs * c};
        case RiskMethod::analytic: return {theta_abs * c, theta_abs * s};
        case RiskMethod::riesz_equal:
        case RiskMethod::riesz_split: {
          const double q = theta_abs * s / std::sqrt(2.0);
          return {theta_abs * c, q, q};
        }
        default:
          return {theta_abs * c, theta_abs * c, theta_abs * s, theta_abs * s};
      }
    }
  }
}

struct RiskCurvePoint {
  double theta_abs = 0.0;
  double value = 0.0;
  double error = 0.0;
};

inline std::vector<RiskCurvePoint> risk_curve(RiskMethod m, RiskProfile profile,
                                              double lambda,
                                              const std::vector<double>& grid,
                                              double abs_tol = 1e-6) {
  std::vector<RiskCurvePoint> out;
  out.reserve(grid.size());
  for (double t : grid) {
    RiskSpec spec;
    spec.method = m;
    spec.theta = risk_profile_theta(profile, m, t);
    spec.lambda = lambda;
    const RiskEval e = risk(spec, abs_tol);
    out.push_back({t, e.value, e.error});
  }
  return out;
}

inline void write_risk_csv_header(std::ostream& os) {
  os.precision(15);
  os << "method,profile,theta_abs,lambda,risk,source,err\n";
}

inline void write_risk_csv_row(std::ostream& os, const std::string& method,
                               const std::string& profile, double theta_abs,
                               double lambda, double value,
                               const std::string& source, double err) {
  os << method << ',' << profile << ',' << theta_abs << ',' << lambda << ','
     << value << ',' << source << ',' << err << "\n";
}

} // namespace hypd
