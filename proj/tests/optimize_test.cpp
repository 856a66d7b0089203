#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wsim/optimize.hpp"
#include "wsim/protocols.hpp"

using namespace wsim;

namespace {
const double kEtaH = (5.0 - std::sqrt(5.0)) / 10.0;
const double kEtaV = (5.0 + std::sqrt(5.0)) / 10.0;
}  // namespace

TEST_CASE("evaluate at reference points") {
  auto [p_opt, f_opt] = evaluate(Reflectivity::optimal(), 2);
  CHECK(p_opt == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f_opt == doctest::Approx(1.0).epsilon(1e-12));

  // balanced splitter: the |HH> branch dies by two-photon interference,
  // leaving a state with W overlap 2/3
  auto [p_bal, f_bal] = evaluate(Reflectivity::balanced(), 2);
  CHECK(p_bal == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(f_bal == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // full mirror: a -> c and b -> d, so every term passes the coincidence but
  // the d photon is always |H> and the state is orthogonal to W_3
  auto [p_mirror, f_mirror] = evaluate(Reflectivity(1.0, 1.0), 2);
  CHECK(p_mirror == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f_mirror == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(evaluate(Reflectivity::optimal(), 0), InvalidN);
}

TEST_CASE("the swapped root keeps the probability but not the state") {
  // eta_h <-> eta_v flips the sign of the |HH> branch: the post-selected
  // state is (-|VHH> + |HVH> + |HHV>)/sqrt(3), overlap 1/3 with W_3
  auto [p, f] = evaluate(Reflectivity(kEtaV, kEtaH), 2);
  CHECK(p == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("closed-form solution") {
  const OptimizationResult r = solve_closed_form();
  CHECK(r.eta_h == doctest::Approx(0.2763932022500210).epsilon(1e-14));
  CHECK(r.eta_v == doctest::Approx(0.7236067977499790).epsilon(1e-14));
  CHECK(std::abs(5.0 * r.eta_h * r.eta_h - 5.0 * r.eta_h + 1.0) < 1e-14);
  CHECK(std::abs(r.eta_h + r.eta_v - 1.0) < 1e-14);
  CHECK(r.probability == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.converged);
  CHECK(r.eta_h < 0.5);  // the labeling picks the smaller root for H
}

TEST_CASE("numeric optimizer recovers the closed form") {
  const OptimizationResult closed = solve_closed_form();
  const OptimizationResult numeric = optimize_numeric(2);
  CHECK(numeric.converged);
  CHECK(std::abs(numeric.eta_h - closed.eta_h) < 1e-6);
  CHECK(std::abs(numeric.eta_v - closed.eta_v) < 1e-6);
  CHECK(std::abs(numeric.probability - 0.3) < 1e-8);
  CHECK(numeric.fidelity >= 1.0 - 1e-9);
  CHECK(numeric.iterations > 0);
}

TEST_CASE("coarser grids refine to the same optimum") {
  const OptimizationResult numeric = optimize_numeric(2, 51, 40);
  CHECK(numeric.converged);
  CHECK(std::abs(numeric.eta_h - kEtaH) < 1e-6);
  CHECK(std::abs(numeric.eta_v - kEtaV) < 1e-6);
}

TEST_CASE("the optimum is independent of n_from for n_from >= 2") {
  const OptimizationResult from3 = optimize_numeric(3, 101, 40);
  CHECK(from3.converged);
  CHECK(std::abs(from3.eta_h - kEtaH) < 1e-6);
  CHECK(std::abs(from3.eta_v - kEtaV) < 1e-6);
  CHECK(std::abs(from3.probability - 4.0 / 15.0) < 1e-8);
}

TEST_CASE("n_from = 1 optimizes to the balanced splitter curve") {
  // W_1 = |V> never drives the |HH> branch, so fidelity is 1 on the whole
  // line eta_h + eta_v = 1 and the probability maximum there is 1/2 at the
  // balanced splitter (the first stage of the improved cascade), not at the
  // W-gate reflectivities
  const OptimizationResult r = optimize_numeric(1, 101, 40);
  CHECK(r.converged);
  CHECK(std::abs(r.eta_h + r.eta_v - 1.0) < 1e-6);
  CHECK(r.fidelity >= 1.0 - 1e-9);
  CHECK(r.probability > 0.49);
  CHECK(r.probability <= 0.5 + 1e-9);
}

TEST_CASE("coarse sanity floor: grid 11 without refinement") {
  const OptimizationResult r = optimize_numeric(2, 11, 0);
  CHECK_FALSE(r.converged);
  CHECK(std::abs(r.eta_h - kEtaH) < 0.05);
  CHECK(std::abs(r.eta_v - kEtaV) < 0.05);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(optimize_numeric(0), InvalidN);
  CHECK_THROWS_AS(optimize_numeric(2, 10, 40), InvalidSpec);
  CHECK_THROWS_AS(optimize_numeric(2, 201, -1), InvalidSpec);
}

TEST_CASE("near-unit-fidelity points hug the constraint surface") {
  // 41x41 lattice of spacing 1e-3 centered at the root: every point with
  // fidelity >= 1 - 1e-6 must satisfy |eta_h + eta_v - 1| <= 2 * spacing
  const double spacing = 1e-3;
  int qualifying = 0;
  for (int i = -20; i <= 20; ++i) {
    for (int j = -20; j <= 20; ++j) {
      const double eta_h = kEtaH + i * spacing;
      const double eta_v = kEtaV + j * spacing;
      const auto [p, f] = evaluate(Reflectivity(eta_h, eta_v), 2);
      if (f >= 1.0 - 1e-6) {
        ++qualifying;
        CHECK(std::abs(eta_h + eta_v - 1.0) <= 2.0 * spacing);
      }
    }
  }
  CHECK(qualifying >= 1);  // the root itself sits on the lattice
}

TEST_CASE("the optimum is a strict feasible maximum along the constraint line") {
  auto constrained_objective = [](double eta_h) {
    const auto [p, f] = evaluate(Reflectivity(eta_h, 1.0 - eta_h), 2);
    return f >= 1.0 - 1e-9 ? p : -1.0;
  };
  const double at_root = constrained_objective(kEtaH);
  CHECK(at_root == doctest::Approx(0.3).epsilon(1e-12));
  for (double step : {-2e-3, -1e-3, 1e-3, 2e-3})
    CHECK(constrained_objective(kEtaH + step) < at_root);
}
