#pragma once

// Classification of Abel inverse-Riccati equations into six canonical classes.
//
// Pipeline: root structure of the cubic numerator -> Moebius map in y sending
// the roots onto a fixed pattern -> Moebius map / shift / scale in x that
// empties the y-coefficient of the denominator down to a constant or a pure
// linear term and makes the y-free part monic -> read off class parameters.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "air/core.hpp"

namespace air {

// ---------------------------------------------------------------------------
// Root structure of the cubic numerator (roots at infinity = degree drop)

enum class RootPattern { ThreeDistinct, TwoDistinct, OneTriple };

inline const char* root_pattern_name(RootPattern p) {
  switch (p) {
    case RootPattern::ThreeDistinct: return "three_distinct";
    case RootPattern::TwoDistinct: return "two_distinct";
    case RootPattern::OneTriple: return "one_triple";
  }
  return "?";
}

struct RootStructure {
  struct Root {
    bool at_infinity = false;
    Complex value{};  // meaningful when finite
    int multiplicity = 1;
  };
  std::vector<Root> roots;  // finite roots first, infinity (if any) last
  int degree = 3;
  RootPattern pattern;
};

namespace detail {

inline Complex polyval(const std::vector<Complex>& c, Complex z) {
  Complex acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline Complex polyder(const std::vector<Complex>& c, Complex z) {
  Complex acc = 0;
  for (std::size_t i = c.size(); i-- > 1;) acc = acc * z + double(i) * c[i];
  return acc;
}

inline void newton_polish(const std::vector<Complex>& c, Complex& root) {
  // Near a multiple root the computed derivative is noise-dominated and a raw
  // Newton step can be arbitrarily bad; keep a step only if it actually
  // shrinks the residual.
  for (int i = 0; i < 3; ++i) {
    Complex f = polyval(c, root);
    Complex df = polyder(c, root);
    if (std::abs(df) == 0) return;
    Complex step = f / df;
    if (!is_finite(step)) return;
    Complex cand = root - step;
    if (std::abs(polyval(c, cand)) >= std::abs(f)) return;
    root = cand;
  }
}

inline std::vector<Complex> quadratic_roots_stable(Complex c0, Complex c1, Complex c2) {
  // c2 z^2 + c1 z + c0, c2 != 0
  Complex sq = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
  Complex t = (std::abs(c1 + sq) >= std::abs(c1 - sq)) ? -(c1 + sq) / 2.0 : -(c1 - sq) / 2.0;
  if (std::abs(t) == 0) return {Complex(0), Complex(0)};
  return {t / c2, c0 / t};
}

}  // namespace detail

// Roots of a0 + a1 y + a2 y^2 + a3 y^3 with multiplicities; leading
// coefficients below 1e-10 of the largest magnitude drop the degree and the
// deficit counts as a root at infinity. Roots closer than
// 1e-7 * (1 + max |root|) are merged into one cluster.
inline RootStructure cubic_roots(const std::array<Complex, 4>& a) {
  double scale = 0;
  for (auto c : a) scale = std::max(scale, std::abs(c));
  if (scale == 0) throw Error(ErrorCode::InvalidArgument, "zero polynomial has no root structure");

  int deg = -1;
  for (int k = 3; k >= 0; --k) {
    if (std::abs(a[k]) > 1e-10 * scale) { deg = k; break; }
  }
  if (deg < 0) throw Error(ErrorCode::InvalidArgument, "zero polynomial has no root structure");

  std::vector<Complex> poly(a.begin(), a.begin() + deg + 1);
  std::vector<Complex> roots;
  if (deg == 1) {
    roots = {-poly[0] / poly[1]};
  } else if (deg == 2) {
    roots = detail::quadratic_roots_stable(poly[0], poly[1], poly[2]);
  } else if (deg == 3) {
    Complex b2 = poly[2] / poly[3], b1 = poly[1] / poly[3], b0 = poly[0] / poly[3];
    Complex p = b1 - b2 * b2 / 3.0;
    Complex q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    Complex shift = -b2 / 3.0;
    if (std::abs(p) == 0 && std::abs(q) == 0) {
      roots = {shift, shift, shift};
    } else {
      Complex D = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
      Complex u3 = -q / 2.0 + D;
      if (std::abs(u3) < std::abs(-q / 2.0 - D)) u3 = -q / 2.0 - D;
      Complex u = std::pow(u3, 1.0 / 3.0);
      const Complex omega(-0.5, std::sqrt(3.0) / 2.0);
      for (int k = 0; k < 3; ++k) {
        Complex uk = u;
        for (int j = 0; j < k; ++j) uk *= omega;
        Complex t = (std::abs(uk) == 0) ? Complex(0) : uk - p / (3.0 * uk);
        roots.push_back(t + shift);
      }
    }
  }
  for (auto& r : roots) detail::newton_polish(poly, r);

  double maxabs = 0;
  for (auto r : roots) maxabs = std::max(maxabs, std::abs(r));
  // A double root of a polynomial with relative coefficient noise eps splits
  // by ~sqrt(eps), a triple by ~cbrt(eps), so the merge radius has to grow
  // with the multiplicity we are testing for.
  double tol2 = 5e-6 * (1.0 + maxabs);
  double tol3 = 5e-4 * (1.0 + maxabs);

  RootStructure out;
  out.degree = deg;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Complex sum = roots[i];
    int cnt = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) <= tol2) {
        used[j] = true;
        sum += roots[j];
        ++cnt;
      }
    }
    out.roots.push_back({false, sum / double(cnt), cnt});
  }
  if (deg == 3 && out.roots.size() >= 2) {
    double spread = 0;
    Complex centroid{};
    for (auto r : roots) centroid += r;
    centroid /= double(roots.size());
    for (auto r : roots) spread = std::max(spread, std::abs(r - centroid));
    if (spread <= tol3) out.roots = {{false, centroid, 3}};
  }
  // The clustered estimate of a multiple root carries the full sqrt/cbrt noise
  // amplification. Re-derive it from the derivative polynomial, where the same
  // root is simple (double root) or the unique zero (triple root): that pins
  // it back down to working precision.
  for (auto& r : out.roots) {
    if (r.multiplicity == 3 && deg == 3) {
      r.value = -poly[2] / (3.0 * poly[3]);
    } else if (r.multiplicity == 2) {
      if (deg == 3) {
        auto drts = detail::quadratic_roots_stable(poly[1], 2.0 * poly[2], 3.0 * poly[3]);
        r.value = (std::abs(drts[0] - r.value) < std::abs(drts[1] - r.value)) ? drts[0] : drts[1];
      } else if (deg == 2) {
        r.value = -poly[1] / (2.0 * poly[2]);
      }
    }
  }
  if (deg < 3) out.roots.push_back({true, Complex{}, 3 - deg});

  int distinct = int(out.roots.size());
  if (distinct == 3) out.pattern = RootPattern::ThreeDistinct;
  else if (distinct == 2) out.pattern = RootPattern::TwoDistinct;
  else out.pattern = RootPattern::OneTriple;
  return out;
}

// ---------------------------------------------------------------------------
// Moebius map through prescribed points (homogeneous coordinates)

struct ProjPoint {
  Complex n{1}, d{0};  // value n/d; d == 0 means the point at infinity
  static ProjPoint finite(Complex v) { return {v, 1}; }
  static ProjPoint infinity() { return {1, 0}; }
  bool is_infinity() const { return std::abs(d) == 0; }
};

// Map m with m(0) = A, m(1) = B, m(infinity) = C.
inline Mobius mobius_through(const ProjPoint& A, const ProjPoint& B, const ProjPoint& C,
                             MobiusTarget target) {
  Complex lambda = C.d * B.n - C.n * B.d;
  Complex mu = A.n * B.d - A.d * B.n;
  Mobius m;
  m.p = lambda * A.n;
  m.r = lambda * A.d;
  m.q = mu * C.n;
  m.s = mu * C.d;
  m.target = target;
  double sc = std::max({std::abs(m.p), std::abs(m.q), std::abs(m.r), std::abs(m.s)});
  if (sc == 0 || std::abs(m.det()) <= kMobiusDegenTol * sc * sc)
    throw Error(ErrorCode::DegenerateMobius, "prescribed points do not determine a Mobius map");
  return m;
}

namespace detail {

// Is the quadratic c2 x^2 + c1 x + c0 double-rooted, counting a degree drop
// as a root at infinity? A zero triple counts as degenerate-double.
inline bool quadratic_double_root(const std::array<Complex, 3>& c) {
  double sc = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
  if (sc == 0) return true;
  auto zero = [&](Complex v) { return std::abs(v) <= kZeroTol * sc; };
  if (!zero(c[2])) {
    Complex center = -c[1] / (2.0 * c[2]);
    Complex half = std::sqrt(c[1] * c[1] - 4.0 * c[2] * c[0]) / (2.0 * c[2]);
    // The split of a genuine double root under coefficient noise from earlier
    // substitutions reaches ~1e-3 of the root scale, while distinct roots in a
    // reduced equation sit orders of magnitude further apart.
    return std::abs(half) <= 5e-3 * (1.0 + std::abs(center));
  }
  if (!zero(c[1])) return false;       // one finite root + one at infinity
  return true;                          // constant: double root at infinity
}

// Rescale so the numerator equals the target pattern polynomial exactly:
// y(y-1) for ThreeDistinct, y for TwoDistinct, 1 for OneTriple.
inline RationalAIR exactify_numerator(RationalAIR eq, RootPattern pattern) {
  std::array<Complex, 4> target{};
  int lead = 0;
  switch (pattern) {
    case RootPattern::ThreeDistinct: target = {0, -1, 1, 0}; lead = 2; break;
    case RootPattern::TwoDistinct: target = {0, 1, 0, 0}; lead = 1; break;
    case RootPattern::OneTriple: target = {1, 0, 0, 0}; lead = 0; break;
  }
  Complex f = eq.num[lead];
  double sc = eq.max_abs_coeff();
  if (std::abs(f) <= 1e-8 * sc)
    throw Error(ErrorCode::Internal, "numerator lost its expected leading coefficient");
  eq = eq.scaled(1.0 / f);
  for (int i = 0; i < 4; ++i) {
    if (std::abs(eq.num[i] - target[i]) > 1e-6)
      throw Error(ErrorCode::Internal, "numerator failed to reach its canonical pattern");
    eq.num[i] = target[i];
  }
  return eq;
}

inline RationalAIR clean_small(RationalAIR eq) {
  double sc = eq.max_abs_coeff();
  auto clean = [&](Complex& c) { if (std::abs(c) <= kZeroTol * sc) c = 0; };
  for (auto& c : eq.den_y) clean(c);
  for (auto& c : eq.den_c) clean(c);
  return eq;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Numerator normalization (Moebius map in y)

// Candidate orderings of the numerator roots as projective points
// (image of 0, image of 1, image of infinity).
struct RootAssignment {
  ProjPoint w0, w1, w2;
  bool identity = false;
};

namespace detail {

inline std::vector<ProjPoint> root_points(const RootStructure& rs) {
  std::vector<ProjPoint> pts;
  for (const auto& r : rs.roots)
    pts.push_back(r.at_infinity ? ProjPoint::infinity() : ProjPoint::finite(r.value));
  return pts;
}

// magnitude order: smaller magnitude first, infinity last; ties by re, then im
inline bool point_less(const ProjPoint& a, const ProjPoint& b) {
  if (a.is_infinity() != b.is_infinity()) return b.is_infinity();
  if (a.is_infinity()) return false;
  Complex av = a.n / a.d, bv = b.n / b.d;
  if (std::abs(std::abs(av) - std::abs(bv)) > 1e-12 * (1 + std::abs(av)))
    return std::abs(av) < std::abs(bv);
  if (av.real() != bv.real()) return av.real() < bv.real();
  return av.imag() < bv.imag();
}

inline ProjPoint anchor_between(const ProjPoint& a, const ProjPoint& b) {
  if (!a.is_infinity() && !b.is_infinity())
    return ProjPoint::finite((a.n / a.d + b.n / b.d) / 2.0);
  const ProjPoint& fin = a.is_infinity() ? b : a;
  return ProjPoint::finite(fin.n / fin.d + 1.0);
}

}  // namespace detail

// All root-to-pattern assignments for the given structure, canonical one first.
inline std::vector<RootAssignment> root_assignments(const RootStructure& rs) {
  std::vector<RootAssignment> out;
  if (rs.pattern == RootPattern::ThreeDistinct) {
    auto pts = detail::root_points(rs);
    std::sort(pts.begin(), pts.end(), detail::point_less);
    std::array<int, 3> idx{0, 1, 2};
    do {
      out.push_back({pts[idx[0]], pts[idx[1]], pts[idx[2]], false});
    } while (std::next_permutation(idx.begin(), idx.end()));
  } else if (rs.pattern == RootPattern::TwoDistinct) {
    ProjPoint simple, dbl;
    for (const auto& r : rs.roots) {
      ProjPoint p = r.at_infinity ? ProjPoint::infinity() : ProjPoint::finite(r.value);
      (r.multiplicity == 1 ? simple : dbl) = p;
    }
    out.push_back({simple, detail::anchor_between(simple, dbl), dbl, false});
  } else {
    const auto& r = rs.roots.front();
    if (r.at_infinity) {
      RootAssignment id{ProjPoint::finite(0), ProjPoint::finite(1), ProjPoint::infinity(), true};
      out.push_back(id);
    } else {
      out.push_back({ProjPoint::finite(r.value + 1.0), ProjPoint::finite(r.value + 2.0),
                     ProjPoint::finite(r.value), false});
    }
  }
  return out;
}

// Apply the y-map written by the assignment; returns the equation with
// numerator exactly y(y-1), y, or 1 and records the step on the chain.
inline RationalAIR normalize_numerator(const RationalAIR& eq, RootPattern pattern,
                                       const RootAssignment& asg, TransformChain& chain) {
  if (asg.identity) return detail::exactify_numerator(eq.normalized(), pattern);
  Mobius m = mobius_through(asg.w0, asg.w1, asg.w2, MobiusTarget::OnY);
  chain.push(TransformStep::mobius_on_y(m));
  RationalAIR out = apply_mobius_y(eq, m);
  // roots sent to the pattern positions leave tiny residue in the dead slots
  double sc = out.max_abs_coeff();
  for (auto& c : out.num)
    if (std::abs(c) <= 1e-6 * sc) c = 0;
  return detail::exactify_numerator(out, pattern);
}

// Convenience overload using the canonical assignment.
inline RationalAIR normalize_numerator(const RationalAIR& eq, TransformChain& chain) {
  auto rs = cubic_roots(eq.num);
  return normalize_numerator(eq, rs.pattern, root_assignments(rs).front(), chain);
}

// ---------------------------------------------------------------------------
// x-reduction

struct ReduceXResult {
  RationalAIR eq;       // numerator restored to the pattern, y-free part monic
  bool case_a = false;  // y-coefficient of the denominator became a constant
  bool degenerate = false;  // x^2 coefficient of the y-free part vanished
};

// Empty the y-coefficient of the denominator: if it is a genuine quadratic,
// substitute x = kappa + 1/t at one of its roots kappa; then shift away a
// surviving constant; finally rescale x so the y-free part is monic.
// force_double_center picks the double root of the quadratic as kappa and is
// used when the classifier already committed to the constant-coefficient case.
inline ReduceXResult reduce_x(const RationalAIR& eq_in, RootPattern pattern,
                              TransformChain& chain, bool force_double_center = false,
                              std::optional<Complex> kappa_override = std::nullopt) {
  RationalAIR eq = eq_in;
  ReduceXResult res;
  double sc = eq.max_abs_coeff();
  auto zero = [&](Complex v) { return std::abs(v) <= kZeroTol * sc; };

  bool forced = false;
  if (!zero(eq.den_y[2])) {
    Complex s0 = eq.den_y[0], s1 = eq.den_y[1], s2 = eq.den_y[2];
    Complex kappa;
    bool dbl = detail::quadratic_double_root(eq.den_y);
    if (kappa_override) {
      kappa = *kappa_override;
    } else if (dbl || force_double_center) {
      kappa = -s1 / (2.0 * s2);
      forced = true;
    } else {
      auto roots = detail::quadratic_roots_stable(s0, s1, s2);
      // prefer a root where the y-free part does not also vanish, then the
      // larger-magnitude root; deterministic tie-break by re, then im
      double rsc = std::max({std::abs(eq.den_c[0]), std::abs(eq.den_c[1]), std::abs(eq.den_c[2])});
      auto rank = [&](Complex k) {
        bool pref = std::abs(eq.den_c_at(k)) > 1e-8 * rsc * (1 + std::norm(k));
        return std::tuple<int, double, double, double>(pref ? 0 : 1, -std::abs(k), -k.real(), -k.imag());
      };
      kappa = roots[0];
      if (rank(roots[1]) < rank(roots[0])) kappa = roots[1];
    }
    TransformStep st = TransformStep::mobius_on_x(Mobius::invert_about(kappa, MobiusTarget::OnX));
    chain.push(st);
    eq = detail::exactify_numerator(st.apply(eq), pattern);
    eq.den_y[2] = 0;  // kappa is a root of the quadratic
    if (forced) eq.den_y[1] = 0;
    eq = detail::clean_small(eq);
    sc = eq.max_abs_coeff();
  }

  if (!zero(eq.den_y[1]) && !zero(eq.den_y[0])) {
    Complex h = -eq.den_y[0] / eq.den_y[1];
    TransformStep st = TransformStep::shift_x(h);
    chain.push(st);
    eq = detail::exactify_numerator(st.apply(eq), pattern);
    eq.den_y[0] = 0;
    eq = detail::clean_small(eq);
    sc = eq.max_abs_coeff();
  }

  res.case_a = zero(eq.den_y[1]);

  if (zero(eq.den_c[2])) {
    res.degenerate = true;
    res.eq = eq;
    return res;
  }

  Complex lam = 1.0 / eq.den_c[2];
  TransformStep st = TransformStep::scale_x(lam);
  chain.push(st);
  eq = detail::exactify_numerator(st.apply(eq), pattern);
  if (std::abs(eq.den_c[2] - 1.0) > 1e-6)
    throw Error(ErrorCode::Internal, "y-free denominator part failed to become monic");
  eq.den_c[2] = 1;
  res.eq = detail::clean_small(eq);
  return res;
}

// ---------------------------------------------------------------------------
// Canonical classes

struct CanonicalClass {
  enum class Tag { C1, C2, C3, C4, C5, C6, DegenerateLinear };
  Tag tag;
  std::vector<Complex> params;

  const char* name() const {
    switch (tag) {
      case Tag::C1: return "C1";
      case Tag::C2: return "C2";
      case Tag::C3: return "C3";
      case Tag::C4: return "C4";
      case Tag::C5: return "C5";
      case Tag::C6: return "C6";
      case Tag::DegenerateLinear: return "DegenerateLinear";
    }
    return "?";
  }

  // The canonical representative equation of the class.
  RationalAIR representative() const {
    RationalAIR eq;
    auto P3 = [&] { eq.num = {0, -1, 1, 0}; };        // y(y-1)
    auto P2 = [&] { eq.num = {0, 1, 0, 0}; };          // y
    auto P1 = [&] { eq.num = {1, 0, 0, 0}; };          // 1
    switch (tag) {
      case Tag::C1: {  // y(y-1) / (a x y + (x-b)(x-c))
        P3();
        eq.den_y = {0, params[0], 0};
        eq.den_c = {params[1] * params[2], -(params[1] + params[2]), 1};
        break;
      }
      case Tag::C2: {  // y(y-1) / (a y + x (x-c))
        P3();
        eq.den_y = {params[0], 0, 0};
        eq.den_c = {0, -params[1], 1};
        break;
      }
      case Tag::C3: {  // y / (x y + (x-b)(x-c))
        P2();
        eq.den_y = {0, 1, 0};
        eq.den_c = {params[0] * params[1], -(params[0] + params[1]), 1};
        break;
      }
      case Tag::C4: {  // y / (y + x (x-c))
        P2();
        eq.den_y = {1, 0, 0};
        eq.den_c = {0, -params[0], 1};
        break;
      }
      case Tag::C5: {  // 1 / (x y + x^2 + b)
        P1();
        eq.den_y = {0, 1, 0};
        eq.den_c = {params[0], 0, 1};
        break;
      }
      case Tag::C6: {  // 1 / (y + x^2)
        P1();
        eq.den_y = {1, 0, 0};
        eq.den_c = {0, 0, 1};
        break;
      }
      case Tag::DegenerateLinear:
        throw Error(ErrorCode::UnsupportedClass, "no canonical representative for the degenerate case");
    }
    return eq;
  }

  static CanonicalClass c1(Complex a, Complex b, Complex c) { return {Tag::C1, {a, b, c}}; }
  static CanonicalClass c2(Complex a, Complex c) { return {Tag::C2, {a, c}}; }
  static CanonicalClass c3(Complex b, Complex c) { return {Tag::C3, {b, c}}; }
  static CanonicalClass c4(Complex c) { return {Tag::C4, {c}}; }
  static CanonicalClass c5(Complex b) { return {Tag::C5, {b}}; }
  static CanonicalClass c6() { return {Tag::C6, {}}; }
  static CanonicalClass degenerate_linear() { return {Tag::DegenerateLinear, {}}; }
};

namespace detail {

inline std::pair<Complex, Complex> ordered_quadratic_roots(Complex c0, Complex c1) {
  // monic x^2 + c1 x + c0; smaller (re, then im) first
  auto rts = quadratic_roots_stable(c0, c1, Complex(1));
  Complex b = rts[0], c = rts[1];
  bool swap_them = (b.real() > c.real() + 1e-14 * (1 + std::abs(b))) ||
                   (std::abs(b.real() - c.real()) <= 1e-14 * (1 + std::abs(b)) && b.imag() > c.imag());
  if (swap_them) std::swap(b, c);
  return {b, c};
}

}  // namespace detail

// Final read-off: takes the reduced equation (numerator = pattern, y-free part
// monic) and produces the class with its parameters, appending the last
// substitutions to the chain.
inline CanonicalClass reduce_to_class(const RationalAIR& eq_in, RootPattern pattern, bool case_a,
                                      TransformChain& chain) {
  RationalAIR eq = eq_in;
  double sc = eq.max_abs_coeff();
  auto zero = [&](Complex v) { return std::abs(v) <= kZeroTol * sc; };
  Complex r1 = eq.den_c[1], r0 = eq.den_c[0];
  auto [b, c] = detail::ordered_quadratic_roots(r0, r1);
  Complex a = case_a ? eq.den_y[0] : eq.den_y[1];
  if (zero(a))
    throw Error(ErrorCode::UnsupportedClass,
                "y-coefficient of the denominator vanishes after reduction; the equation is not of Abel type");

  auto finish = [&](const CanonicalClass& cls, std::initializer_list<TransformStep> steps) {
    for (const auto& st : steps) {
      chain.push(st);
      eq = detail::exactify_numerator(st.apply(eq), pattern);
      eq = detail::clean_small(eq);
    }
    if (proj_distance(eq, cls.representative()) > 1e-8)
      throw Error(ErrorCode::Internal, "reduced equation does not match its canonical representative");
    return cls;
  };

  switch (pattern) {
    case RootPattern::ThreeDistinct: {
      if (!case_a) return finish(CanonicalClass::c1(a, b, c), {});
      return finish(CanonicalClass::c2(a, c - b), {TransformStep::shift_x(b)});
    }
    case RootPattern::TwoDistinct: {
      if (!case_a) return finish(CanonicalClass::c3(b, c), {TransformStep::scale_y(1.0 / a)});
      return finish(CanonicalClass::c4(c - b),
                    {TransformStep::scale_y(1.0 / a), TransformStep::shift_x(b)});
    }
    case RootPattern::OneTriple: {
      if (!case_a) {
        // y = (v - r1) / a, then x and v scaled by sqrt(a)
        Complex sa = std::sqrt(a);
        Mobius my{-r1 / a, 1.0 / a, 1, 0, MobiusTarget::OnY};
        return finish(CanonicalClass::c5(r0 / a),
                      {TransformStep::mobius_on_y(my), TransformStep::scale_x(sa),
                       TransformStep::scale_y(sa)});
      }
      // kill the linear x term, then scale to unit coefficients
      std::vector<TransformStep> steps;
      Complex rr0 = r0;
      if (!zero(r1)) {
        steps.push_back(TransformStep::shift_x(-r1 / 2.0));
        rr0 = r0 - r1 * r1 / 4.0;
      }
      Complex ca = std::pow(a, 1.0 / 3.0);
      steps.push_back(TransformStep::scale_x(ca));
      Mobius my{-rr0 / a, 1.0 / ca, 1, 0, MobiusTarget::OnY};
      steps.push_back(TransformStep::mobius_on_y(my));
      CanonicalClass cls = CanonicalClass::c6();
      for (const auto& st : steps) {
        chain.push(st);
        eq = detail::exactify_numerator(st.apply(eq), pattern);
        eq = detail::clean_small(eq);
      }
      if (proj_distance(eq, cls.representative()) > 1e-8)
        throw Error(ErrorCode::Internal, "reduced equation does not match its canonical representative");
      return cls;
    }
  }
  throw Error(ErrorCode::Internal, "unreachable");
}

// ---------------------------------------------------------------------------
// Full classification

struct ClassifyResult {
  CanonicalClass cls{CanonicalClass::Tag::C6, {}};
  TransformChain chain;       // input equation -> canonical representative
  RationalAIR canonical;      // the representative actually reached
  RootStructure roots;
  bool case_a = false;
};

inline ClassifyResult classify(const RationalAIR& input) {
  input.validate();
  RationalAIR eq = input.normalized();
  ClassifyResult out;
  out.roots = cubic_roots(eq.num);

  auto assignments = root_assignments(out.roots);
  RootAssignment chosen = assignments.front();
  bool committed_double = false;
  if (out.roots.pattern == RootPattern::ThreeDistinct) {
    // The maps preserving the root pattern mix the two denominator slots; the
    // constant-coefficient case is reachable iff some assignment produces a
    // double-rooted y-coefficient quadratic. Scan all six.
    for (const auto& asg : assignments) {
      Mobius m = mobius_through(asg.w0, asg.w1, asg.w2, MobiusTarget::OnY);
      std::array<Complex, 3> slot{};
      for (int i = 0; i < 3; ++i) slot[i] = m.q * eq.den_y[i] + m.s * eq.den_c[i];
      if (detail::quadratic_double_root(slot)) {
        chosen = asg;
        committed_double = true;
        break;
      }
    }
  }

  RationalAIR eq8 = normalize_numerator(eq, out.roots.pattern, chosen, out.chain);
  ReduceXResult red = reduce_x(eq8, out.roots.pattern, out.chain, committed_double);
  out.case_a = red.case_a;
  if (red.degenerate) {
    out.cls = CanonicalClass::degenerate_linear();
    out.canonical = red.eq;
    return out;
  }
  out.cls = reduce_to_class(red.eq, out.roots.pattern, red.case_a, out.chain);
  out.canonical = out.cls.representative();

  if (proj_distance(out.chain.apply(input), out.canonical) > 1e-8)
    throw Error(ErrorCode::Internal, "transformation chain does not reproduce the canonical form");
  return out;
}

}  // namespace air
