#pragma once

// End-to-end driver shared by the CLI and the tests: classify an equation,
// attach the closed-form solution, verify it numerically, and emit a JSON
// report.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "air/classify.hpp"
#include "air/core.hpp"
#include "air/parse.hpp"
#include "air/solve.hpp"

namespace air {

using Json = nlohmann::json;

inline Json complex_to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return Complex(j[0].get<double>(), j[1].get<double>());
  if (j.is_object()) return Complex(j.value("re", 0.0), j.value("im", 0.0));
  throw Error(ErrorCode::ParseShape, "complex value must be a number, [re, im] or {re, im}");
}

// Coefficient-file form of an equation: keys a0..a3, s0..s2, r0..r2.
inline RationalAIR equation_from_json(const Json& j) {
  RationalAIR eq;
  const char* an[] = {"a0", "a1", "a2", "a3"};
  const char* sn[] = {"s0", "s1", "s2"};
  const char* rn[] = {"r0", "r1", "r2"};
  for (int i = 0; i < 4; ++i)
    if (j.contains(an[i])) eq.num[i] = complex_from_json(j.at(an[i]));
  for (int i = 0; i < 3; ++i) {
    if (j.contains(sn[i])) eq.den_y[i] = complex_from_json(j.at(sn[i]));
    if (j.contains(rn[i])) eq.den_c[i] = complex_from_json(j.at(rn[i]));
  }
  eq.validate();
  return eq;
}

struct RunOptions {
  bool classify_only = false;
  double tol = 1e-6;
  std::optional<double> x0;
  std::optional<Complex> y0;
  std::optional<double> x1;
  unsigned seed = 0;
};

struct RunResult {
  Json report;
  int exit_code = 0;  // 0 ok, 2 verification failed, 1 error
};

namespace detail {

inline Json chain_to_json(const TransformChain& chain) {
  Json arr = Json::array();
  for (const auto& st : chain.steps) {
    arr.push_back(Json{{"kind", step_kind_name(st.kind)},
                       {"p", complex_to_json(st.map.p)},
                       {"q", complex_to_json(st.map.q)},
                       {"r", complex_to_json(st.map.r)},
                       {"s", complex_to_json(st.map.s)}});
  }
  return arr;
}

inline Json class_to_json(const CanonicalClass& cls) {
  Json params = Json::array();
  for (auto p : cls.params) params.push_back(complex_to_json(p));
  return Json{{"name", cls.name()}, {"params", params}};
}

// Candidate start points on a jittered grid over [-1,1]^2 (y gets a small
// imaginary offset so trajectories dodge real-axis branch points), ranked by
// the magnitude of the equation denominator.
inline std::vector<std::pair<double, Complex>> candidate_points(const RationalAIR& eq,
                                                                const ImplicitSolution& sol,
                                                                unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jit(-0.02, 0.02);
  struct Cand { double score; double x; Complex y; };
  std::vector<Cand> cands;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      double x = -1.0 + 2.0 * i / 19.0 + jit(rng);
      Complex y(-1.0 + 2.0 * j / 19.0 + jit(rng), 0.1);
      double den = std::abs(eq.denominator_at(Complex(x), y));
      if (den < 1e-3) continue;
      Complex L;
      try {
        L = sol.level(Complex(x), y);
      } catch (const Error&) {
        continue;
      }
      if (!is_finite(L)) continue;
      // Favour points where the trajectory actually moves: a near-stationary
      // path verifies any level function and tells us nothing. Score by how
      // close |y'| is to 1 on a log scale, with the denominator margin as a
      // mild bonus against integrating into a pole.
      double speed = std::abs(eq.rhs(Complex(x), y));
      if (speed < 1e-6 || speed > 1e3) continue;
      double score = -std::abs(std::log10(speed)) + 0.1 * std::log10(den);
      cands.push_back({score, x, y});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.score > b.score; });
  std::vector<std::pair<double, Complex>> out;
  for (const auto& c : cands) out.push_back({c.x, c.y});
  return out;
}

}  // namespace detail

inline RunResult run(const RationalAIR& eq, const RunOptions& opt) {
  RunResult res;
  res.report["input"] = Json{{"text", render(eq)}};
  {
    Json coeffs;
    const char* an[] = {"a0", "a1", "a2", "a3"};
    const char* sn[] = {"s0", "s1", "s2"};
    const char* rn[] = {"r0", "r1", "r2"};
    for (int i = 0; i < 4; ++i) coeffs[an[i]] = complex_to_json(eq.num[i]);
    for (int i = 0; i < 3; ++i) {
      coeffs[sn[i]] = complex_to_json(eq.den_y[i]);
      coeffs[rn[i]] = complex_to_json(eq.den_c[i]);
    }
    res.report["input"]["coefficients"] = coeffs;
  }

  try {
    ClassifyResult cr = classify(eq);
    res.report["class"] = detail::class_to_json(cr.cls);
    res.report["root_pattern"] = root_pattern_name(cr.roots.pattern);
    res.report["chain"] = detail::chain_to_json(cr.chain);

    if (cr.cls.tag == CanonicalClass::Tag::DegenerateLinear) {
      res.report["note"] =
          "x^2 coefficient of the y-free denominator part vanished; the equation reduces to a "
          "linear/quadrature problem and no special-function solution is attached";
      res.exit_code = 0;
      return res;
    }
    if (opt.classify_only) {
      res.exit_code = 0;
      return res;
    }

    ImplicitSolution canonical_sol = solve_canonical(cr.cls);
    ImplicitSolution sol = pull_back(canonical_sol, cr.chain);
    res.report["solution"] = Json{{"basis", canonical_sol.description}};

    std::vector<std::pair<double, Complex>> starts;
    if (opt.x0 && opt.y0) {
      starts.push_back({*opt.x0, *opt.y0});
    } else {
      starts = detail::candidate_points(eq, sol, opt.seed);
      if (starts.size() > 10) starts.resize(10);
      if (starts.empty())
        throw Error(ErrorCode::Evaluation, "no usable start point found for verification");
    }

    std::string last_err;
    bool have_best = false;
    Json best;
    for (const auto& [x0, y0] : starts) {
      double x1 = opt.x1 ? *opt.x1 : x0 + 0.5;
      try {
        VerifyResult vr = residual_verify(eq, sol, x0, y0, x1);
        bool pass = vr.drift < opt.tol;
        Json attempt = Json{{"x0", x0},
                            {"y0", complex_to_json(y0)},
                            {"x1", x1},
                            {"points", vr.points_checked},
                            {"drift", vr.drift},
                            {"tol", opt.tol},
                            {"hit_singularity", vr.trajectory.hit_singularity},
                            {"passed", pass}};
        if (pass) {
          res.report["verification"] = attempt;
          res.exit_code = 0;
          return res;
        }
        // a single path can cross a branch cut of the level function, so a
        // failure here is only final once every candidate start has failed
        if (!have_best || attempt["drift"].get<double>() < best["drift"].get<double>()) {
          best = attempt;
          have_best = true;
        }
        if (opt.x0 && opt.y0) break;  // explicit point: report this attempt
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Evaluation && e.code() != ErrorCode::Convergence &&
            e.code() != ErrorCode::Domain)
          throw;
        last_err = e.what();
        if (opt.x0 && opt.y0) throw;  // explicit point: report the failure
      }
    }
    if (have_best) {
      res.report["verification"] = best;
      res.exit_code = 2;
      return res;
    }
    throw Error(ErrorCode::Evaluation,
                "verification failed at every candidate start point: " + last_err);
  } catch (const Error& e) {
    res.report["error"] = Json{{"code", error_code_name(e.code())}, {"message", e.what()}};
    res.exit_code = 1;
    return res;
  }
}

}  // namespace air
