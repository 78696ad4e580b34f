#include <catch2/catch_amalgamated.hpp>

#include "air/report.hpp"
#include "air/solve.hpp"
#include "test_util.hpp"

using air::CanonicalClass;
using air::Complex;
using air::RationalAIR;

TEST_CASE("integrator reproduces an exponential") {
  RationalAIR eq;  // y' = y / 1
  eq.num = {0, 1, 0, 0};
  eq.den_c = {1, 0, 0};
  auto tr = air::integrate_ode(eq, 0.0, Complex(0.7, 0.2), 1.0);
  REQUIRE(!tr.hit_singularity);
  Complex want = Complex(0.7, 0.2) * std::exp(1.0);
  REQUIRE(std::abs(tr.y.back() - want) < 1e-8);

  // halving the tolerances tightens the answer (self-convergence)
  auto tr2 = air::integrate_ode(eq, 0.0, Complex(0.7, 0.2), 1.0, 1e-12, 1e-14);
  REQUIRE(std::abs(tr2.y.back() - want) < std::abs(tr.y.back() - want) + 1e-12);
}

TEST_CASE("integrator flags a denominator collapse") {
  RationalAIR eq;  // y' = 1/y, solution y = sqrt(y0^2 + 2x) collapses at x = -y0^2/2
  eq.num = {1, 0, 0, 0};
  eq.den_y = {1, 0, 0};
  auto tr = air::integrate_ode(eq, 0.0, Complex(0.3, 0.0), -0.2);
  REQUIRE(tr.hit_singularity);
  REQUIRE(std::abs(tr.singular_x - (-0.045)) < 1e-2);
}

TEST_CASE("level functions are constant along canonical trajectories") {
  struct Case {
    CanonicalClass cls;
    double x0, x1;
    Complex y0;
  };
  std::vector<Case> cases = {
      {CanonicalClass::c6(), 0.0, 1.0, Complex(1.0, 0.0)},
      {CanonicalClass::c5(0.8), 0.1, 0.6, Complex(0.2, 0.1)},
      {CanonicalClass::c4(0.5), 0.2, 0.8, Complex(0.3, 0.1)},
      {CanonicalClass::c3(0.35, 1.45), 0.2, 0.7, Complex(0.3, 0.1)},
      {CanonicalClass::c2(0.9, 0.6), 0.1, 0.6, Complex(0.3, 0.1)},
      {CanonicalClass::c1(1.1, 0.4, -0.7), 0.9, 1.4, Complex(0.3, 0.1)},
  };
  for (const auto& cs : cases) {
    INFO(cs.cls.name());
    auto sol = air::solve_canonical(cs.cls);
    auto vr = air::residual_verify(cs.cls.representative(), sol, cs.x0, cs.y0, cs.x1);
    REQUIRE(vr.drift < 1e-6);
    REQUIRE(vr.points_checked >= 5);
  }
}

TEST_CASE("a wrong solution is loudly non-constant") {
  auto sol_c6 = air::solve_canonical(CanonicalClass::c6());
  RationalAIR other = CanonicalClass::c5(0.8).representative();
  auto vr = air::residual_verify(other, sol_c6, 0.1, Complex(0.2, 0.1), 0.6);
  REQUIRE(vr.drift > 1e-2);
}

TEST_CASE("degenerate basis pairs are rejected") {
  air::BasisPair bp;
  bp.w1 = bp.w2 = [](Complex y) { return std::exp(y); };
  bp.dw1 = bp.dw2 = [](Complex y) { return std::exp(y); };
  REQUIRE_THROWS_AS(air::build_implicit_from_basis(bp), air::Error);
}

TEST_CASE("pull-back through a shift solves the shifted equation") {
  // chain x_old = x_new + 1 maps y' = 1/(y + (x-1)^2) onto y' = 1/(y + x^2)
  air::TransformChain chain;
  chain.push(air::TransformStep::shift_x(1.0));
  RationalAIR input;
  input.num = {1, 0, 0, 0};
  input.den_y = {1, 0, 0};
  input.den_c = {1, -2, 1};
  REQUIRE(air::proj_distance(chain.apply(input), CanonicalClass::c6().representative()) < 1e-14);

  auto sol = air::pull_back(air::solve_canonical(CanonicalClass::c6()), chain);
  auto vr = air::residual_verify(input, sol, 1.0, Complex(1.0, 0.0), 2.0);
  REQUIRE(vr.drift < 1e-6);
}

TEST_CASE("full pipeline solves disguised equations") {
  testutil::Rng rng(151);
  int done = 0;
  for (int tag : {3, 4, 5, 2}) {  // C4, C5, C6, C3
    CanonicalClass cls = testutil::random_class(rng, tag);
    RationalAIR hidden = testutil::disguise(cls.representative(), rng);
    air::RunOptions opt;
    opt.tol = 1e-5;
    auto res = air::run(hidden, opt);
    INFO(cls.name() << ": " << res.report.dump());
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.report["verification"]["passed"].get<bool>());
    ++done;
  }
  REQUIRE(done == 4);
}

TEST_CASE("swapping x and y turns solutions into solutions") {
  // integrate the swapped (Riccati) form of C4 and check the level on the
  // swapped-back points
  CanonicalClass cls = CanonicalClass::c4(0.5);
  RationalAIR eq = cls.representative();
  auto sol = air::solve_canonical(cls);
  auto rhs = [&](double t, Complex u) {
    return eq.denominator_at(u, Complex(t)) / eq.numerator_at(Complex(t));
  };
  auto den = [&](double t, Complex u) { return eq.numerator_at(Complex(t)); };
  auto tr = air::integrate_path(rhs, den, 0.3, Complex(0.6, 0.2), 0.9);
  REQUIRE(!tr.hit_singularity);
  Complex L0 = sol.level(tr.y.front(), Complex(tr.x.front()));
  double drift = 0;
  for (std::size_t i = 0; i < tr.x.size(); ++i) {
    Complex L = sol.level(tr.y[i], Complex(tr.x[i]));
    drift = std::max(drift, std::abs(L - L0) / (1.0 + std::abs(L0)));
  }
  REQUIRE(drift < 1e-7);
}

TEST_CASE("basis recombination leaves level sets invariant") {
  // an invertible recombination changes the level value by a Moebius map,
  // so constancy along trajectories must survive
  auto base = air::gauss_basis(0.3, -0.4, 1.7);
  air::BasisPair mixed;
  mixed.w1 = [&](Complex y) { return 2.0 * base.w1(y) + 0.3 * base.w2(y); };
  mixed.dw1 = [&](Complex y) { return 2.0 * base.dw1(y) + 0.3 * base.dw2(y); };
  mixed.w2 = [&](Complex y) { return -0.5 * base.w1(y) + 1.1 * base.w2(y); };
  mixed.dw2 = [&](Complex y) { return -0.5 * base.dw1(y) + 1.1 * base.dw2(y); };
  mixed.description = "recombined";
  auto sol = air::build_implicit_from_basis(mixed);
  RationalAIR eq = air::gauss_abel_form(0.3, -0.4, 1.7);
  auto vr = air::residual_verify(eq, sol, 0.9, Complex(0.3, 0.1), 1.4);
  REQUIRE(vr.drift < 1e-7);
}

TEST_CASE("constructed hypergeometric chains verify against their own forms") {
  // the Gauss-associated form solves itself through the basis construction
  RationalAIR eq = air::gauss_abel_form(0.3, -0.4, 1.7);
  auto sol = air::build_implicit_from_basis(air::gauss_basis(0.3, -0.4, 1.7));
  auto vr = air::residual_verify(eq, sol, 0.9, Complex(0.3, 0.1), 1.4);
  REQUIRE(vr.drift < 1e-8);
}

TEST_CASE("basis degeneracy at gamma near 1 is reported") {
  REQUIRE_THROWS_AS(air::gauss_basis(0.3, -0.3, 1.0), air::Error);
}
