#pragma once

// Shared helpers for the test suite: reproducible random draws, independent
// polynomial-root and derivative oracles, and a disguise generator that hides
// canonical equations behind random substitutions.

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "air/classify.hpp"
#include "air/core.hpp"

namespace testutil {

using air::Complex;

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}

  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  Complex box(double half_side) { return Complex(real(-half_side, half_side), real(-half_side, half_side)); }

  // complex draw kept away from the integer lattice on the real axis
  Complex noninteger(double lo, double hi) {
    for (;;) {
      Complex z(real(lo, hi), real(-0.4, 0.4));
      if (std::abs(z.real() - std::round(z.real())) > 0.05 || std::abs(z.imag()) > 0.05) return z;
    }
  }

  air::Mobius mobius(air::MobiusTarget t) {
    for (;;) {
      air::Mobius m{box(2.0), box(2.0), box(2.0), box(2.0), t};
      double sc = std::max({std::abs(m.p), std::abs(m.q), std::abs(m.r), std::abs(m.s)});
      if (sc > 0.3 && std::abs(m.det()) > 0.5) return m;
    }
  }

  air::RationalAIR equation() {
    for (;;) {
      air::RationalAIR eq;
      for (auto& c : eq.num) c = box(1.5);
      for (auto& c : eq.den_y) c = box(1.5);
      for (auto& c : eq.den_c) c = box(1.5);
      try {
        eq.validate();
        return eq;
      } catch (const air::Error&) {
      }
    }
  }
};

// Hide an equation behind one random substitution in each variable.
inline air::RationalAIR disguise(const air::RationalAIR& eq, Rng& rng) {
  air::RationalAIR out = air::apply_mobius_y(eq, rng.mobius(air::MobiusTarget::OnY));
  return air::apply_mobius_x(out, rng.mobius(air::MobiusTarget::OnX));
}

// Independent root oracle (Durand-Kerner) for c[0] + c[1] z + ... + c[d] z^d.
inline std::vector<Complex> durand_kerner(std::vector<Complex> c) {
  while (c.size() > 1 && std::abs(c.back()) == 0) c.pop_back();
  int d = int(c.size()) - 1;
  if (d < 1) return {};
  for (auto& v : c) v /= c.back();
  std::vector<Complex> z(d);
  Complex seed(0.4, 0.9);
  z[0] = Complex(1);
  for (int i = 1; i < d; ++i) z[i] = z[i - 1] * seed;
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0;
    for (int i = 0; i < d; ++i) {
      Complex num = 0;
      for (int k = d; k >= 0; --k) num = num * z[i] + c[k];
      Complex den = 1;
      for (int j = 0; j < d; ++j)
        if (j != i) den *= z[i] - z[j];
      Complex step = num / den;
      z[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-14) break;
  }
  return z;
}

// Fourth-order central difference, accurate to ~1e-12 for smooth functions.
inline Complex deriv4(const std::function<Complex(Complex)>& f, Complex z, double h = 1e-3) {
  return (-f(z + 2 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2 * h)) / (12.0 * h);
}

inline Complex deriv4_second(const std::function<Complex(Complex)>& f, Complex z, double h = 2e-3) {
  return (-f(z + 2 * h) + 16.0 * f(z + h) - 30.0 * f(z) + 16.0 * f(z - h) - f(z - 2 * h)) /
         (12.0 * h * h);
}

// Pointwise chain-rule check of a y-substitution: if the transformed equation
// is right, then rhs_old(x, m(v)) == m'(v) * rhs_new(x, v) everywhere.
inline double mobius_y_residual(const air::RationalAIR& before, const air::RationalAIR& after,
                                const air::Mobius& m, Rng& rng, int samples = 8) {
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    Complex x = rng.box(1.2), v = rng.box(1.2);
    Complex den = m.r + m.s * v;
    if (std::abs(den) < 0.1) continue;
    Complex y = m.apply(v);
    Complex dm = (m.q * m.r - m.p * m.s) / (den * den);
    Complex lhs = before.rhs(x, y);
    Complex rhs = dm * after.rhs(x, v);
    if (!air::is_finite(lhs) || !air::is_finite(rhs)) continue;
    if (std::abs(lhs) > 1e4 || std::abs(rhs) > 1e4) continue;
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  return worst;
}

// Same for an x-substitution: rhs_old(m(t), y) * m'(t) == rhs_new(t, y).
inline double mobius_x_residual(const air::RationalAIR& before, const air::RationalAIR& after,
                                const air::Mobius& m, Rng& rng, int samples = 8) {
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    Complex t = rng.box(1.2), y = rng.box(1.2);
    Complex den = m.r + m.s * t;
    if (std::abs(den) < 0.1) continue;
    Complex x = m.apply(t);
    Complex dm = (m.q * m.r - m.p * m.s) / (den * den);
    Complex lhs = before.rhs(x, y) * dm;
    Complex rhs = after.rhs(t, y);
    if (!air::is_finite(lhs) || !air::is_finite(rhs)) continue;
    if (std::abs(lhs) > 1e4 || std::abs(rhs) > 1e4) continue;
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  return worst;
}

// A random canonical class with parameters kept away from degenerate loci.
inline air::CanonicalClass random_class(Rng& rng, int tag_index) {
  auto param = [&] {
    for (;;) {
      Complex p = rng.box(1.2);
      if (std::abs(p) > 0.25) return p;
    }
  };
  switch (tag_index) {
    case 0: {
      Complex b = param(), c = param();
      while (std::abs(b - c) < 0.2) c = param();
      return air::CanonicalClass::c1(param(), b, c);
    }
    case 1: return air::CanonicalClass::c2(param(), param());
    case 2: {
      Complex b = param(), c = param();
      while (std::abs(b - c) < 0.2) c = param();
      return air::CanonicalClass::c3(b, c);
    }
    case 3: return air::CanonicalClass::c4(param());
    case 4: return air::CanonicalClass::c5(param());
    default: return air::CanonicalClass::c6();
  }
}

}  // namespace testutil
