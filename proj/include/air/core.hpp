#pragma once

// Core value types for Abel equations of the inverse-Riccati rational form
//
//   y' = (a3 y^3 + a2 y^2 + a1 y + a0) / ((s0 + s1 x + s2 x^2) y + r0 + r1 x + r2 x^2)
//
// together with Moebius (linear fractional) substitutions of either variable
// and the invertible record of substitutions applied during a reduction.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace air {

using Complex = std::complex<double>;

inline constexpr double kZeroTol = 1e-9;       // relative zero test for coefficients
inline constexpr double kMobiusDegenTol = 1e-12;

enum class ErrorCode {
  InvalidArgument,
  DegenerateMobius,
  Pole,
  Convergence,
  UnsupportedParameter,
  UnsupportedClass,
  BasisDegenerate,
  Domain,
  Evaluation,
  ParseSyntax,
  ParseShape,
  VerifyFailure,
  Internal,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "E_INVALID_ARGUMENT";
    case ErrorCode::DegenerateMobius: return "E_DEGENERATE_MOBIUS";
    case ErrorCode::Pole: return "E_POLE";
    case ErrorCode::Convergence: return "E_CONVERGENCE";
    case ErrorCode::UnsupportedParameter: return "E_UNSUPPORTED_PARAMETER";
    case ErrorCode::UnsupportedClass: return "E_UNSUPPORTED_CLASS";
    case ErrorCode::BasisDegenerate: return "E_BASIS_DEGENERATE";
    case ErrorCode::Domain: return "E_DOMAIN";
    case ErrorCode::Evaluation: return "E_EVALUATION";
    case ErrorCode::ParseSyntax: return "E_PARSE_SYNTAX";
    case ErrorCode::ParseShape: return "E_PARSE_SHAPE";
    case ErrorCode::VerifyFailure: return "E_VERIFY_FAILURE";
    case ErrorCode::Internal: return "E_INTERNAL";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }
 private:
  ErrorCode code_;
};

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(Complex z, const char* what) {
  if (!is_finite(z)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is not finite");
}

// ---------------------------------------------------------------------------
// RationalAIR

struct RationalAIR {
  std::array<Complex, 4> num{};    // a0, a1, a2, a3
  std::array<Complex, 3> den_y{};  // s0, s1, s2  (coefficient of y, quadratic in x)
  std::array<Complex, 3> den_c{};  // r0, r1, r2  (y-free part, quadratic in x)

  Complex numerator_at(Complex y) const {
    return ((num[3] * y + num[2]) * y + num[1]) * y + num[0];
  }
  Complex den_y_at(Complex x) const { return (den_y[2] * x + den_y[1]) * x + den_y[0]; }
  Complex den_c_at(Complex x) const { return (den_c[2] * x + den_c[1]) * x + den_c[0]; }
  Complex denominator_at(Complex x, Complex y) const { return den_y_at(x) * y + den_c_at(x); }
  Complex rhs(Complex x, Complex y) const { return numerator_at(y) / denominator_at(x, y); }

  double max_abs_coeff() const {
    double m = 0;
    for (auto c : num) m = std::max(m, std::abs(c));
    for (auto c : den_y) m = std::max(m, std::abs(c));
    for (auto c : den_c) m = std::max(m, std::abs(c));
    return m;
  }

  void validate() const {
    for (auto c : num) require_finite(c, "numerator coefficient");
    for (auto c : den_y) require_finite(c, "denominator coefficient");
    for (auto c : den_c) require_finite(c, "denominator coefficient");
    double n = 0, d = 0;
    for (auto c : num) n = std::max(n, std::abs(c));
    for (auto c : den_y) d = std::max(d, std::abs(c));
    for (auto c : den_c) d = std::max(d, std::abs(c));
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "numerator is identically zero");
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "denominator is identically zero");
  }

  // Rescale so the largest-magnitude coefficient has magnitude 1.
  RationalAIR normalized() const {
    double m = max_abs_coeff();
    if (m == 0) return *this;
    return scaled(1.0 / m);
  }

  RationalAIR scaled(Complex factor) const {
    RationalAIR out = *this;
    for (auto& c : out.num) c *= factor;
    for (auto& c : out.den_y) c *= factor;
    for (auto& c : out.den_c) c *= factor;
    return out;
  }
};

// Relative distance between the two equations viewed as points of projective
// coefficient space (a common complex factor is quotiented out by least squares).
inline double proj_distance(const RationalAIR& a, const RationalAIR& b) {
  std::array<Complex, 10> u{}, v{};
  for (int i = 0; i < 4; ++i) { u[i] = a.num[i]; v[i] = b.num[i]; }
  for (int i = 0; i < 3; ++i) { u[4 + i] = a.den_y[i]; v[4 + i] = b.den_y[i]; }
  for (int i = 0; i < 3; ++i) { u[7 + i] = a.den_c[i]; v[7 + i] = b.den_c[i]; }
  Complex num = 0;
  double den = 0, unorm = 0;
  for (int i = 0; i < 10; ++i) {
    num += u[i] * std::conj(v[i]);
    den += std::norm(v[i]);
    unorm += std::norm(u[i]);
  }
  if (den == 0 || unorm == 0) return (den == 0 && unorm == 0) ? 0.0 : 1.0;
  Complex lambda = num / den;
  double err2 = 0;
  for (int i = 0; i < 10; ++i) err2 += std::norm(u[i] - lambda * v[i]);
  return std::sqrt(err2 / unorm);
}

// ---------------------------------------------------------------------------
// Moebius maps

enum class MobiusTarget { OnX, OnY };

// The map v -> (p + q v) / (r + s v). The identity is (p,q,r,s) = (0,1,1,0).
struct Mobius {
  Complex p{0}, q{1}, r{1}, s{0};
  MobiusTarget target = MobiusTarget::OnY;

  Complex det() const { return p * s - r * q; }

  void validate() const {
    require_finite(p, "Mobius p");
    require_finite(q, "Mobius q");
    require_finite(r, "Mobius r");
    require_finite(s, "Mobius s");
    double scale = std::max({std::abs(p), std::abs(q), std::abs(r), std::abs(s)});
    if (scale == 0 || std::abs(det()) <= kMobiusDegenTol * scale * scale)
      throw Error(ErrorCode::DegenerateMobius, "degenerate Mobius map (p*s - r*q ~ 0)");
  }

  Complex apply(Complex v) const {
    Complex d = r + s * v;
    if (std::abs(d) == 0) throw Error(ErrorCode::Evaluation, "Mobius map evaluated at its pole");
    return (p + q * v) / d;
  }

  Mobius inverse() const {
    Mobius m{-p, r, q, -s, target};
    return m;
  }

  static Mobius identity(MobiusTarget t) { return Mobius{0, 1, 1, 0, t}; }
  static Mobius shift(Complex b, MobiusTarget t) { return Mobius{b, 1, 1, 0, t}; }
  static Mobius scale(Complex k, MobiusTarget t) { return Mobius{0, k, 1, 0, t}; }
  // v -> kappa + 1/v
  static Mobius invert_about(Complex kappa, MobiusTarget t) { return Mobius{1, kappa, 0, 1, t}; }
};

// first(second(v)) as a single map; both must act on the same variable.
inline Mobius compose(const Mobius& first, const Mobius& second) {
  if (first.target != second.target)
    throw Error(ErrorCode::InvalidArgument, "cannot compose Mobius maps on different variables");
  // matrix [[q, p], [s, r]] acting on (v : 1)
  Mobius m;
  m.q = first.q * second.q + first.p * second.s;
  m.p = first.q * second.p + first.p * second.r;
  m.s = first.s * second.q + first.r * second.s;
  m.r = first.s * second.p + first.r * second.r;
  m.target = first.target;
  return m;
}

namespace detail {
// coefficients of (p + q v)^k (r + s v)^(3-k), degree 3
inline std::array<Complex, 4> pq_rs_pow3(Complex p, Complex q, Complex r, Complex s, int k) {
  std::array<Complex, 4> out{};
  out[0] = 1;
  int deg = 0;
  auto mul = [&](Complex c0, Complex c1) {
    std::array<Complex, 4> nxt{};
    for (int i = 0; i <= deg; ++i) {
      nxt[i] += out[i] * c0;
      nxt[i + 1] += out[i] * c1;
    }
    out = nxt;
    ++deg;
  };
  for (int i = 0; i < k; ++i) mul(p, q);
  for (int i = 0; i < 3 - k; ++i) mul(r, s);
  return out;
}
}  // namespace detail

// Substitute y = (p + q v)/(r + s v); returns the equation satisfied by v.
// The rational structure is preserved exactly.
inline RationalAIR apply_mobius_y(const RationalAIR& eq, const Mobius& m) {
  if (m.target != MobiusTarget::OnY)
    throw Error(ErrorCode::InvalidArgument, "apply_mobius_y needs a map on y");
  m.validate();
  eq.validate();
  RationalAIR out;
  for (int k = 0; k < 4; ++k) {
    auto pw = detail::pq_rs_pow3(m.p, m.q, m.r, m.s, k);
    for (int i = 0; i < 4; ++i) out.num[i] += eq.num[k] * pw[i];
  }
  Complex w = m.q * m.r - m.p * m.s;  // -det
  for (int i = 0; i < 3; ++i) {
    out.den_y[i] = w * (m.q * eq.den_y[i] + m.s * eq.den_c[i]);
    out.den_c[i] = w * (m.p * eq.den_y[i] + m.r * eq.den_c[i]);
  }
  return out.normalized();
}

// Substitute x = (p + q t)/(r + s t); returns the equation in the variable t.
inline RationalAIR apply_mobius_x(const RationalAIR& eq, const Mobius& m) {
  if (m.target != MobiusTarget::OnX)
    throw Error(ErrorCode::InvalidArgument, "apply_mobius_x needs a map on x");
  m.validate();
  eq.validate();
  // (r + s t)^2 * Q((p + q t)/(r + s t)) for a quadratic Q
  auto lift = [&](const std::array<Complex, 3>& c) {
    std::array<Complex, 3> out{};
    // c0 (r+st)^2 + c1 (p+qt)(r+st) + c2 (p+qt)^2
    out[0] = c[0] * m.r * m.r + c[1] * m.p * m.r + c[2] * m.p * m.p;
    out[1] = c[0] * 2.0 * m.r * m.s + c[1] * (m.p * m.s + m.q * m.r) + c[2] * 2.0 * m.p * m.q;
    out[2] = c[0] * m.s * m.s + c[1] * m.q * m.s + c[2] * m.q * m.q;
    return out;
  };
  Complex w = m.q * m.r - m.p * m.s;  // dx/dt = w / (r+st)^2
  RationalAIR out;
  for (int i = 0; i < 4; ++i) out.num[i] = w * eq.num[i];
  out.den_y = lift(eq.den_y);
  out.den_c = lift(eq.den_c);
  return out.normalized();
}

inline RationalAIR apply_mobius(const RationalAIR& eq, const Mobius& m) {
  return m.target == MobiusTarget::OnX ? apply_mobius_x(eq, m) : apply_mobius_y(eq, m);
}

// ---------------------------------------------------------------------------
// Transformation record

enum class StepKind { MobiusOnX, MobiusOnY, ScaleX, ScaleY, ShiftX, ShiftY };

inline const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::MobiusOnX: return "mobius_x";
    case StepKind::MobiusOnY: return "mobius_y";
    case StepKind::ScaleX: return "scale_x";
    case StepKind::ScaleY: return "scale_y";
    case StepKind::ShiftX: return "shift_x";
    case StepKind::ShiftY: return "shift_y";
  }
  return "?";
}

// One substitution old_var = map(new_var). Scales and shifts are stored as the
// equivalent Moebius map so inversion and replay share a single code path.
struct TransformStep {
  StepKind kind;
  Mobius map;

  TransformStep inverse() const {
    TransformStep s{kind, map.inverse()};
    return s;
  }

  RationalAIR apply(const RationalAIR& eq) const { return apply_mobius(eq, map); }

  bool on_x() const { return map.target == MobiusTarget::OnX; }

  static TransformStep mobius_on_x(const Mobius& m) { return {StepKind::MobiusOnX, m}; }
  static TransformStep mobius_on_y(const Mobius& m) { return {StepKind::MobiusOnY, m}; }
  static TransformStep scale_x(Complex k) { return {StepKind::ScaleX, Mobius::scale(k, MobiusTarget::OnX)}; }
  static TransformStep scale_y(Complex k) { return {StepKind::ScaleY, Mobius::scale(k, MobiusTarget::OnY)}; }
  static TransformStep shift_x(Complex b) { return {StepKind::ShiftX, Mobius::shift(b, MobiusTarget::OnX)}; }
  static TransformStep shift_y(Complex b) { return {StepKind::ShiftY, Mobius::shift(b, MobiusTarget::OnY)}; }
};

struct TransformChain {
  std::vector<TransformStep> steps;

  bool empty() const { return steps.empty(); }
  void push(TransformStep s) { steps.push_back(std::move(s)); }
  void append(const TransformChain& other) {
    steps.insert(steps.end(), other.steps.begin(), other.steps.end());
  }

  // Replay every substitution on an equation, in order.
  RationalAIR apply(const RationalAIR& eq) const {
    RationalAIR cur = eq;
    for (const auto& s : steps) cur = s.apply(cur);
    return cur;
  }

  TransformChain inverted() const {
    TransformChain out;
    out.steps.reserve(steps.size());
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) out.push(it->inverse());
    return out;
  }

  // Map a point of the source equation to the corresponding point of the
  // transformed equation (each step's substitution run backwards).
  std::pair<Complex, Complex> point_forward(Complex x, Complex y) const {
    for (const auto& s : steps) {
      Mobius inv = s.map.inverse();
      if (s.on_x()) x = inv.apply(x); else y = inv.apply(y);
    }
    return {x, y};
  }

  // Map a point of the transformed equation back to the source equation.
  std::pair<Complex, Complex> point_backward(Complex x, Complex y) const {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      if (it->on_x()) x = it->map.apply(x); else y = it->map.apply(y);
    }
    return {x, y};
  }
};

inline TransformChain chain_invert(const TransformChain& chain) { return chain.inverted(); }

}  // namespace air
