#pragma once

// Closed-form implicit solutions for the canonical classes, pull-back along
// transformation chains, and an independent Runge-Kutta verifier.
//
// The construction behind every class: swapping the roles of x and y turns
// the equation into a Riccati equation for x(y), whose solutions are ratios
// built from a second-order linear ODE. Two independent solutions w1, w2 of
// that linear ODE give the conserved quantity
//   level(x, y) = (x f(y) w1(y) + w1'(y)) / (x f(y) w2(y) + w2'(y)).

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "air/classify.hpp"
#include "air/core.hpp"
#include "air/specfun.hpp"

namespace air {

// ---------------------------------------------------------------------------
// Basis pairs and implicit solutions

struct BasisPair {
  std::function<Complex(Complex)> w1, dw1, w2, dw2;
  std::string description;
};

struct ImplicitSolution {
  std::function<Complex(Complex, Complex)> level;
  std::string description;
};

// Level surface for the f(y) = 1/y family (numerator divisible by y):
// level = (x w1 + y w1') / (x w2 + y w2'). The basis is probed for linear
// independence at probe_y before use.
inline ImplicitSolution build_implicit_from_basis(const BasisPair& basis,
                                                  Complex probe_y = Complex(0.31, 0.17)) {
  Complex w1 = basis.w1(probe_y), w2 = basis.w2(probe_y);
  Complex d1 = basis.dw1(probe_y), d2 = basis.dw2(probe_y);
  Complex wr = w1 * d2 - w2 * d1;
  double sc = std::max({std::abs(w1), std::abs(w2), std::abs(d1), std::abs(d2)});
  if (!is_finite(wr) || sc == 0 || std::abs(wr) <= 1e-10 * sc * sc)
    throw Error(ErrorCode::BasisDegenerate, "basis pair has a vanishing Wronskian");
  ImplicitSolution sol;
  sol.description = basis.description;
  sol.level = [basis](Complex x, Complex y) {
    Complex num = x * basis.w1(y) + y * basis.dw1(y);
    Complex den = x * basis.w2(y) + y * basis.dw2(y);
    return num / den;
  };
  return sol;
}

// Solution of the source equation from a solution of the transformed one.
inline ImplicitSolution pull_back(const ImplicitSolution& sol, const TransformChain& chain) {
  ImplicitSolution out;
  out.description = sol.description;
  out.level = [sol, chain](Complex x, Complex y) {
    auto [u, v] = chain.point_forward(x, y);
    return sol.level(u, v);
  };
  return out;
}

// ---------------------------------------------------------------------------
// Hypergeometric-backed classes (three distinct numerator roots)

// The Gauss-associated Abel form
//   y' = y(y-1) / ((x - alpha)(x - beta) y - x^2 + (gamma - 1) x)
// whose swapped Riccati linearizes to the hypergeometric equation.
inline RationalAIR gauss_abel_form(Complex alpha, Complex beta, Complex gamma) {
  RationalAIR eq;
  eq.num = {0, -1, 1, 0};
  eq.den_y = {alpha * beta, -(alpha + beta), 1};
  eq.den_c = {0, gamma - 1.0, -1};
  return eq;
}

inline BasisPair gauss_basis(Complex alpha, Complex beta, Complex gamma,
                             const SeriesConfig& cfg = {}) {
  if (std::abs(gamma - 1.0) < 1e-6)
    throw Error(ErrorCode::BasisDegenerate, "hypergeometric basis collapses for gamma near 1");
  BasisPair b;
  b.description = "2F1 basis";
  b.w1 = [=](Complex y) { return hyp2f1(alpha, beta, gamma, y, cfg); };
  b.dw1 = [=](Complex y) { return hyp2f1_deriv(alpha, beta, gamma, y, cfg); };
  Complex a2 = alpha - gamma + 1.0, b2 = beta - gamma + 1.0, c2 = 2.0 - gamma;
  b.w2 = [=](Complex y) { return std::pow(y, 1.0 - gamma) * hyp2f1(a2, b2, c2, y, cfg); };
  b.dw2 = [=](Complex y) {
    return (1.0 - gamma) * std::pow(y, -gamma) * hyp2f1(a2, b2, c2, y, cfg) +
           std::pow(y, 1.0 - gamma) * hyp2f1_deriv(a2, b2, c2, y, cfg);
  };
  return b;
}

namespace detail {

// Solution of the canonical equation `target` reached from the Gauss-associated
// form along `chain` (which maps the Gauss form onto the representative).
inline ImplicitSolution gauss_solution_through_chain(Complex alpha, Complex beta, Complex gamma,
                                                     const TransformChain& chain,
                                                     const SeriesConfig& cfg) {
  ImplicitSolution base = build_implicit_from_basis(gauss_basis(alpha, beta, gamma, cfg));
  ImplicitSolution out;
  out.description = base.description;
  out.level = [base, chain](Complex x, Complex y) {
    auto [u, v] = chain.point_backward(x, y);
    return base.level(u, v);
  };
  return out;
}

inline ImplicitSolution solve_c1(Complex a, Complex b, Complex c, const SeriesConfig& cfg) {
  RationalAIR target = CanonicalClass::c1(a, b, c).representative();
  Complex e = b + c - a;
  std::string last_err = "no hypergeometric parameter branch matched";
  for (int su = 0; su < 2; ++su) {
    Complex u = (e + (su ? -1.0 : 1.0) * std::sqrt(e * e - 4.0 * b * c)) / 2.0;
    Complex G = 2.0 * u - (b + c);
    for (int sk = 0; sk < 2; ++sk) {
      Complex kap = (-G + (sk ? -1.0 : 1.0) * std::sqrt(G * G + 4.0 * a * u)) / 2.0;
      Complex gamma = G + 2.0 * kap + 1.0;
      Complex alpha = kap, beta = kap - a;
      for (int sc = 0; sc < 2; ++sc) {
        Complex center = sc ? beta : alpha;
        try {
          RationalAIR eq = gauss_abel_form(alpha, beta, gamma);
          TransformChain chain;
          auto red = reduce_x(eq, RootPattern::ThreeDistinct, chain, false, center);
          if (red.case_a || red.degenerate) continue;
          CanonicalClass got = reduce_to_class(red.eq, RootPattern::ThreeDistinct, false, chain);
          if (got.tag != CanonicalClass::Tag::C1) continue;
          if (proj_distance(got.representative(), target) > 1e-8) continue;
          return gauss_solution_through_chain(alpha, beta, gamma, chain, cfg);
        } catch (const Error& err) {
          if (err.code() == ErrorCode::BasisDegenerate || err.code() == ErrorCode::Pole)
            last_err = err.what();
          continue;
        }
      }
    }
  }
  throw Error(ErrorCode::BasisDegenerate, last_err);
}

inline ImplicitSolution solve_c2(Complex a, Complex c, const SeriesConfig& cfg) {
  // alpha, beta are the roots of z^2 + c z + a; gamma = 1 - c
  auto rts = quadratic_roots_stable(a, c, Complex(1));
  Complex alpha = rts[0], beta = rts[1], gamma = 1.0 - c;
  RationalAIR eq = gauss_abel_form(alpha, beta, gamma);
  TransformChain chain;
  Mobius my{0, 1, -1, 1, MobiusTarget::OnY};  // y = v / (v - 1)
  chain.push(TransformStep::mobius_on_y(my));
  chain.push(TransformStep::scale_x(-1.0));
  RationalAIR reached = chain.apply(eq);
  if (proj_distance(reached, CanonicalClass::c2(a, c).representative()) > 1e-8)
    throw Error(ErrorCode::Internal, "hypergeometric chain missed the canonical form");
  return gauss_solution_through_chain(alpha, beta, gamma, chain, cfg);
}

// ---------------------------------------------------------------------------
// Confluent, Bessel and Airy classes

inline ImplicitSolution solve_c3(Complex b, Complex c, const SeriesConfig& cfg) {
  // x(y) Riccati linearizes to Kummer's equation after peeling y^(-c)
  Complex ka = -c, kb = 1.0 + b - c;
  BasisPair bp;
  bp.description = "Kummer M/U basis";
  bp.w1 = [=](Complex y) { return std::pow(y, -c) * kummer_m(ka, kb, y, cfg); };
  bp.dw1 = [=](Complex y) {
    return -c * std::pow(y, -c - 1.0) * kummer_m(ka, kb, y, cfg) +
           std::pow(y, -c) * kummer_m_deriv(ka, kb, y, cfg);
  };
  bp.w2 = [=](Complex y) { return std::pow(y, -c) * kummer_u(ka, kb, y, cfg); };
  bp.dw2 = [=](Complex y) {
    return -c * std::pow(y, -c - 1.0) * kummer_u(ka, kb, y, cfg) +
           std::pow(y, -c) * kummer_u_deriv(ka, kb, y, cfg);
  };
  return build_implicit_from_basis(bp);
}

inline ImplicitSolution solve_c4(Complex c, const SeriesConfig& cfg) {
  ImplicitSolution sol;
  sol.description = "Bessel J/Y pair";
  sol.level = [c, cfg](Complex x, Complex y) {
    Complex sq = std::sqrt(y), z = 2.0 * sq;
    Complex num = x * bessel_j(c, z, cfg) - bessel_j(c + 1.0, z, cfg) * sq;
    Complex den = -x * bessel_y(c, z, cfg) + bessel_y(c + 1.0, z, cfg) * sq;
    return num / den;
  };
  return sol;
}

inline ImplicitSolution solve_c5(Complex b, const SeriesConfig& cfg) {
  ImplicitSolution sol;
  sol.description = "Kummer M/U pair";
  sol.level = [b, cfg](Complex x, Complex y) {
    Complex z = y * y / 2.0;
    Complex a1 = (3.0 - b) / 2.0, a0 = (1.0 - b) / 2.0, h = Complex(1.5);
    Complex num = 2.0 * (1.0 - b) * kummer_m(a1, h, z, cfg) +
                  2.0 * kummer_m(a0, h, z, cfg) * (b + x * y);
    Complex den = b * (b - 1.0) * kummer_u(a1, h, z, cfg) +
                  2.0 * kummer_u(a0, h, z, cfg) * (b + x * y);
    return num / den;
  };
  return sol;
}

inline ImplicitSolution solve_c6(const SeriesConfig& cfg) {
  ImplicitSolution sol;
  sol.description = "Airy Ai/Bi pair";
  sol.level = [cfg](Complex x, Complex y) {
    Complex num = x * airy_bi(-y, cfg) - airy_bi_deriv(-y, cfg);
    Complex den = x * airy_ai(-y, cfg) - airy_ai_deriv(-y, cfg);
    return num / den;
  };
  return sol;
}

}  // namespace detail

// Closed-form implicit solution of the canonical representative of a class.
inline ImplicitSolution solve_canonical(const CanonicalClass& cls, const SeriesConfig& cfg = {}) {
  switch (cls.tag) {
    case CanonicalClass::Tag::C1:
      return detail::solve_c1(cls.params[0], cls.params[1], cls.params[2], cfg);
    case CanonicalClass::Tag::C2:
      return detail::solve_c2(cls.params[0], cls.params[1], cfg);
    case CanonicalClass::Tag::C3:
      return detail::solve_c3(cls.params[0], cls.params[1], cfg);
    case CanonicalClass::Tag::C4:
      return detail::solve_c4(cls.params[0], cfg);
    case CanonicalClass::Tag::C5:
      return detail::solve_c5(cls.params[0], cfg);
    case CanonicalClass::Tag::C6:
      return detail::solve_c6(cfg);
    case CanonicalClass::Tag::DegenerateLinear:
      throw Error(ErrorCode::UnsupportedClass,
                  "the degenerate case reduces to a linear equation; no special-function solution is attached");
  }
  throw Error(ErrorCode::Internal, "unreachable");
}

// ---------------------------------------------------------------------------
// Independent numerical integration (Dormand-Prince 5(4))

struct Trajectory {
  std::vector<double> x;
  std::vector<Complex> y;
  bool hit_singularity = false;
  double singular_x = 0;
};

// Integrate y' = rhs(x, y) along the real segment from x0 to x1 with adaptive
// steps. den(x, y) is monitored; the run stops early with the singularity
// flag when it drops below 1e-8 in magnitude or the step size collapses.
inline Trajectory integrate_path(const std::function<Complex(double, Complex)>& rhs,
                                 const std::function<Complex(double, Complex)>& den,
                                 double x0, Complex y0, double x1,
                                 double rtol = 1e-10, double atol = 1e-12) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Trajectory tr;
  double span = x1 - x0;
  if (span == 0) {
    tr.x = {x0};
    tr.y = {y0};
    return tr;
  }
  double dir = span > 0 ? 1.0 : -1.0;
  double x = x0;
  Complex y = y0;
  tr.x.push_back(x);
  tr.y.push_back(y);

  if (std::abs(den(x, y)) < 1e-8) {
    tr.hit_singularity = true;
    tr.singular_x = x;
    return tr;
  }

  double h = dir * std::min(std::abs(span) / 16.0, 0.05);
  const double hmin = 1e-14 * (1.0 + std::abs(span));
  Complex k1 = rhs(x, y);
  if (!is_finite(k1)) throw Error(ErrorCode::Evaluation, "right-hand side not finite at the start point");

  for (int iter = 0; iter < 200000; ++iter) {
    if ((x - x1) * dir >= -1e-15 * (1 + std::abs(x1))) return tr;
    if (std::abs(h) > std::abs(x1 - x)) h = x1 - x;

    Complex k2 = rhs(x + c2 * h, y + h * (a21 * k1));
    Complex k3 = rhs(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
    Complex k4 = rhs(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Complex k5 = rhs(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Complex k6 = rhs(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Complex ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Complex k7 = is_finite(ynew) ? rhs(x + h, ynew) : Complex(NAN, NAN);
    bool ok = is_finite(ynew) && is_finite(k7);

    double err = 2.0;
    if (ok) {
      Complex ee = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double scale = atol + rtol * std::max(std::abs(y), std::abs(ynew));
      err = std::abs(ee) / scale;
    }

    if (err <= 1.0) {
      x += h;
      y = ynew;
      k1 = k7;
      tr.x.push_back(x);
      tr.y.push_back(y);
      if (std::abs(den(x, y)) < 1e-8) {
        tr.hit_singularity = true;
        tr.singular_x = x;
        return tr;
      }
      double fac = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
      h *= fac;
    } else {
      h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
    }
    if (std::abs(h) < hmin) {
      tr.hit_singularity = true;
      tr.singular_x = x;
      return tr;
    }
  }
  throw Error(ErrorCode::Convergence, "integrator exceeded its step budget");
}

inline Trajectory integrate_ode(const RationalAIR& eq, double x0, Complex y0, double x1,
                                double rtol = 1e-10, double atol = 1e-12) {
  eq.validate();
  auto rhs = [eq](double x, Complex y) { return eq.rhs(Complex(x), y); };
  auto den = [eq](double x, Complex y) { return eq.denominator_at(Complex(x), y); };
  return integrate_path(rhs, den, x0, y0, x1, rtol, atol);
}

// ---------------------------------------------------------------------------
// Verification of an implicit solution against the integrator

struct VerifyResult {
  double drift = 0;            // max relative deviation of the level along the path
  int points_checked = 0;
  Trajectory trajectory;
};

inline VerifyResult residual_verify(const RationalAIR& eq, const ImplicitSolution& sol,
                                    double x0, Complex y0, double x1,
                                    double rtol = 1e-10, double atol = 1e-12) {
  VerifyResult res;
  Complex L0 = sol.level(Complex(x0), y0);
  if (!is_finite(L0))
    throw Error(ErrorCode::Evaluation, "level function is not finite at the initial point");
  res.trajectory = integrate_ode(eq, x0, y0, x1, rtol, atol);
  for (std::size_t i = 0; i < res.trajectory.x.size(); ++i) {
    Complex L;
    try {
      L = sol.level(Complex(res.trajectory.x[i]), res.trajectory.y[i]);
    } catch (const Error&) {
      continue;  // isolated points outside the special-function domain
    }
    if (!is_finite(L)) continue;
    res.drift = std::max(res.drift, std::abs(L - L0) / (1.0 + std::abs(L0)));
    ++res.points_checked;
  }
  if (res.points_checked < 5)
    throw Error(ErrorCode::Evaluation, "too few usable points along the trajectory to verify");
  return res;
}

}  // namespace air
