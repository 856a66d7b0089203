#pragma once

// Recovers the expansion-gate reflectivities by constrained grid search and
// by the closed-form coefficient-matching derivation.

#include <utility>

#include "wsim/elements.hpp"

namespace wsim {

struct OptimizationResult {
  double eta_h = 0.0;
  double eta_v = 0.0;
  double probability = 0.0;
  double fidelity = 0.0;
  int iterations = 0;      // number of gate evaluations performed
  bool converged = false;  // implies fidelity >= 1 - 1e-9
};

/// Objective wrapper: expands W_{n_from} once with reflectivities `r` and
/// returns (success probability, fidelity with W_{n_from+1}). Deterministic.
std::pair<double, double> evaluate(const Reflectivity& r, int n_from);

/// Coefficient matching: equal post-selected amplitudes force
/// eta_h + eta_v = 1 and 5*eta_h^2 - 5*eta_h + 1 = 0; the eta_h < 1/2 root
/// is returned, evaluated at n_from = 2.
OptimizationResult solve_closed_form();

/// Two-stage deterministic search over [0,1]^2. Stage 1 scans a grid x grid
/// lattice and keeps the best probability among points with fidelity
/// >= 1 - 1e-4 (falling back to the best-fidelity point when the lattice is
/// too coarse for any to qualify; NoFeasiblePoint below fidelity 0.99).
/// Stage 2 re-grids an 11x11 lattice over a window centered on the
/// incumbent, halving the window each round and selecting by fidelity first
/// (then probability, then smaller eta_h, then smaller eta_v), which pins the
/// search to the unit-fidelity point rather than the edge of the feasible
/// region. Ties anywhere prefer smaller eta_h.
OptimizationResult optimize_numeric(int n_from = 2, int grid = 201, int refine_rounds = 40);

}  // namespace wsim
