#pragma once

// Special functions over the complex numbers, implemented from scratch:
// gamma (Lanczos), Gauss hypergeometric 2F1, confluent pair M and U,
// limit 0F1, Bessel J and Y, Airy Ai/Bi and derivatives.
//
// Every series run reports non-convergence as an error; results are never
// silently truncated.

#include <cmath>
#include <complex>
#include <string>

#include "air/core.hpp"

namespace air {

struct SeriesConfig {
  double rel_tol = 1e-15;
  int max_terms = 100000;
};

namespace detail {

inline bool near_nonpositive_int(Complex z, double tol = 1e-12) {
  double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) <= tol && std::abs(z.imag()) <= tol;
}

inline bool near_int(Complex z, double tol = 1e-9) {
  return std::abs(z.real() - std::round(z.real())) <= tol && std::abs(z.imag()) <= tol;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gamma

inline Complex gamma_fn(Complex z) {
  if (detail::near_nonpositive_int(z))
    throw Error(ErrorCode::Pole, "gamma pole at a non-positive integer");
  static const double g = 7.0;
  static const double coef[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    const double pi = 3.14159265358979323846;
    return pi / (std::sin(pi * z) * gamma_fn(1.0 - z));
  }
  z -= 1.0;
  Complex x = coef[0];
  for (int i = 1; i < 9; ++i) x += coef[i] / (z + double(i));
  Complex t = z + g + 0.5;
  const double sqrt2pi = 2.5066282746310002;
  return sqrt2pi * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// 1/Gamma(z); zero at the poles instead of an error.
inline Complex rgamma(Complex z) {
  if (detail::near_nonpositive_int(z)) return 0.0;
  return 1.0 / gamma_fn(z);
}

// ---------------------------------------------------------------------------
// Series engine

namespace detail {

// sum of terms t_n with t_0 = 1 and t_{n+1} = t_n * ratio(n); convergence is
// declared after two consecutive negligible terms.
template <typename Ratio>
inline Complex sum_hyp_series(Ratio ratio, const SeriesConfig& cfg, const char* name) {
  Complex term = 1.0, sum = 1.0;
  int quiet = 0;
  for (int n = 0; n < cfg.max_terms; ++n) {
    term *= ratio(n);
    sum += term;
    if (std::abs(term) <= cfg.rel_tol * (std::abs(sum) + 1e-300)) {
      if (++quiet >= 2) return sum;
    } else {
      quiet = 0;
    }
    if (!is_finite(sum))
      throw Error(ErrorCode::Convergence, std::string(name) + " series overflowed");
  }
  throw Error(ErrorCode::Convergence,
              std::string(name) + " series did not converge within the term budget");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gauss 2F1

inline Complex hyp2f1(Complex a, Complex b, Complex c, Complex z,
                      const SeriesConfig& cfg = {}) {
  if (detail::near_nonpositive_int(c))
    throw Error(ErrorCode::Pole, "2F1 parameter c at a non-positive integer");
  // terminating cases converge for any z
  bool poly = detail::near_nonpositive_int(a) || detail::near_nonpositive_int(b);
  double az = std::abs(z);
  if (poly || az <= 0.8) {
    return detail::sum_hyp_series(
        [&](int n) { return (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * z; },
        cfg, "2F1");
  }
  Complex w = z / (z - 1.0);
  if (std::abs(w) <= 0.95 && std::abs(w) < az) {
    // Pfaff: 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
    Complex inner = detail::sum_hyp_series(
        [&, cb = c - b](int n) {
          return (a + double(n)) * (cb + double(n)) / ((c + double(n)) * double(n + 1)) * w;
        },
        cfg, "2F1");
    return std::pow(1.0 - z, -a) * inner;
  }
  if (az <= 0.95) {
    return detail::sum_hyp_series(
        [&](int n) { return (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * z; },
        cfg, "2F1");
  }
  throw Error(ErrorCode::Domain,
              "2F1 argument outside the supported region (|z| and |z/(z-1)| both > 0.95)");
}

// d/dz 2F1(a,b;c;z) = (a b / c) 2F1(a+1,b+1;c+1;z)
inline Complex hyp2f1_deriv(Complex a, Complex b, Complex c, Complex z,
                            const SeriesConfig& cfg = {}) {
  return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z, cfg);
}

// ---------------------------------------------------------------------------
// Confluent M and U

inline Complex kummer_m(Complex a, Complex b, Complex z, const SeriesConfig& cfg = {}) {
  if (detail::near_nonpositive_int(b))
    throw Error(ErrorCode::Pole, "1F1 parameter b at a non-positive integer");
  return detail::sum_hyp_series(
      [&](int n) { return (a + double(n)) / ((b + double(n)) * double(n + 1)) * z; }, cfg, "1F1");
}

inline Complex kummer_m_deriv(Complex a, Complex b, Complex z, const SeriesConfig& cfg = {}) {
  return a / b * kummer_m(a + 1.0, b + 1.0, z, cfg);
}

// Tricomi U via the connection formula; integer b is nudged off the integer
// lattice by 1e-6 so the formula stays usable.
inline Complex kummer_u(Complex a, Complex b, Complex z, const SeriesConfig& cfg = {}) {
  if (std::abs(z) == 0) throw Error(ErrorCode::Domain, "U(a,b,0) is singular");
  if (detail::near_int(b)) b += 1e-6;
  Complex term1 = gamma_fn(1.0 - b) * rgamma(a - b + 1.0) * kummer_m(a, b, z, cfg);
  Complex term2 = gamma_fn(b - 1.0) * rgamma(a) * std::pow(z, 1.0 - b) *
                  kummer_m(a - b + 1.0, 2.0 - b, z, cfg);
  return term1 + term2;
}

inline Complex kummer_u_deriv(Complex a, Complex b, Complex z, const SeriesConfig& cfg = {}) {
  return -a * kummer_u(a + 1.0, b + 1.0, z, cfg);
}

// ---------------------------------------------------------------------------
// 0F1

inline Complex hyp0f1(Complex b, Complex z, const SeriesConfig& cfg = {}) {
  if (detail::near_nonpositive_int(b))
    throw Error(ErrorCode::Pole, "0F1 parameter b at a non-positive integer");
  return detail::sum_hyp_series(
      [&](int n) { return z / ((b + double(n)) * double(n + 1)); }, cfg, "0F1");
}

// ---------------------------------------------------------------------------
// Bessel J and Y (complex order and argument)

inline Complex bessel_j(Complex nu, Complex z, const SeriesConfig& cfg = {}) {
  if (std::abs(z) == 0) {
    if (std::abs(nu) == 0) return 1.0;
    if (nu.real() > 0) return 0.0;
    throw Error(ErrorCode::Domain, "J_nu(0) is singular for re(nu) < 0");
  }
  Complex front = std::pow(z / 2.0, nu) * rgamma(nu + 1.0);
  return front * hyp0f1(nu + 1.0, -z * z / 4.0, cfg);
}

// Integer order is nudged by 1e-6 so the connection formula applies.
inline Complex bessel_y(Complex nu, Complex z, const SeriesConfig& cfg = {}) {
  if (std::abs(z) == 0) throw Error(ErrorCode::Domain, "Y_nu(0) is singular");
  if (detail::near_int(nu)) nu += 1e-6;
  const double pi = 3.14159265358979323846;
  Complex s = std::sin(pi * nu);
  return (bessel_j(nu, z, cfg) * std::cos(pi * nu) - bessel_j(-nu, z, cfg)) / s;
}

// ---------------------------------------------------------------------------
// Airy functions from the 0F1 representation

namespace detail {

struct AiryParts {
  Complex f, g, df, dg;  // f = 0F1(;2/3;u), g = z 0F1(;4/3;u), u = z^3/9
};

inline AiryParts airy_parts(Complex z, const SeriesConfig& cfg) {
  AiryParts p;
  Complex u = z * z * z / 9.0;
  p.f = hyp0f1(Complex(2.0 / 3.0), u, cfg);
  p.g = z * hyp0f1(Complex(4.0 / 3.0), u, cfg);
  p.df = z * z / 2.0 * hyp0f1(Complex(5.0 / 3.0), u, cfg);
  p.dg = hyp0f1(Complex(4.0 / 3.0), u, cfg) + z * z * z / 4.0 * hyp0f1(Complex(7.0 / 3.0), u, cfg);
  return p;
}

inline double airy_c1() {  // 3^(-2/3) / Gamma(2/3)
  static const double v = std::pow(3.0, -2.0 / 3.0) / 1.35411793942640041695;
  return v;
}
inline double airy_c2() {  // 3^(-1/3) / Gamma(1/3)
  static const double v = std::pow(3.0, -1.0 / 3.0) / 2.67893853470774763366;
  return v;
}

}  // namespace detail

inline Complex airy_ai(Complex z, const SeriesConfig& cfg = {}) {
  auto p = detail::airy_parts(z, cfg);
  return detail::airy_c1() * p.f - detail::airy_c2() * p.g;
}

inline Complex airy_ai_deriv(Complex z, const SeriesConfig& cfg = {}) {
  auto p = detail::airy_parts(z, cfg);
  return detail::airy_c1() * p.df - detail::airy_c2() * p.dg;
}

inline Complex airy_bi(Complex z, const SeriesConfig& cfg = {}) {
  auto p = detail::airy_parts(z, cfg);
  const double s3 = 1.7320508075688772935;
  return s3 * (detail::airy_c1() * p.f + detail::airy_c2() * p.g);
}

inline Complex airy_bi_deriv(Complex z, const SeriesConfig& cfg = {}) {
  auto p = detail::airy_parts(z, cfg);
  const double s3 = 1.7320508075688772935;
  return s3 * (detail::airy_c1() * p.df + detail::airy_c2() * p.dg);
}

}  // namespace air
