#pragma once

// W-state construction, the single-photon expansion gate, the cascaded
// preparation protocols, and the closed-form success probabilities.

#include <vector>

#include "wsim/elements.hpp"
#include "wsim/fock.hpp"
#include "wsim/postselect.hpp"

namespace wsim {

enum class SourceKind { SinglePhotons, EprSeed };
enum class FirstElement { Pdbs, Balanced };

/// Recipe for preparing W_target_n from scratch.
struct CascadeSpec {
  int target_n = 2;
  SourceKind source = SourceKind::SinglePhotons;
  FirstElement first_element = FirstElement::Pdbs;
  Reflectivity reflectivity = Reflectivity::optimal();

  /// Throws InvalidSpec unless target_n >= 2, the EPR seed is used only for
  /// target_n >= 3, and the balanced first element only with single photons.
  void validate() const;
};

struct ExpansionReport {
  double success_probability = 0.0;
  /// Closed-form value at the optimal reflectivities; otherwise a copy of
  /// the simulated probability (no closed form exists off the optimum).
  double analytic_probability = 0.0;
  double fidelity_with_target = 0.0;
  StateVector output_state;
  int steps = 0;
};

/// One row of the per-stage cascade trace.
struct CascadeStage {
  int stage = 0;
  double probability = 0.0;
  double cumulative = 0.0;
  double fidelity = 0.0;  // against the W state of the current photon count
};

/// W_n on modes 0..n-1: n terms of amplitude 1/sqrt(n), each with a single V
/// photon. n = 1 gives |V>. Throws InvalidN for n < 1.
StateVector build_w(int n);

/// (|HV> + |VH>)/sqrt(2) on modes 0 and 1; identical to build_w(2).
StateVector build_epr();

/// Adds one photon to `s`: tensors an |H> ancilla onto a fresh mode b, sends
/// (attach_mode, b) through the PDBS followed by the half-wave plate, then
/// post-selects one photon in every output mode. Output modes are relabeled
/// to 0..n. Requires every basis term of `s` to hold exactly one photon in
/// attach_mode (NotSingleOccupied otherwise).
ExpansionReport expand_once(const StateVector& s, int attach_mode, const Reflectivity& r);

ExpansionReport run_cascade(const CascadeSpec& spec);
ExpansionReport run_cascade(const CascadeSpec& spec, std::vector<CascadeStage>& trace);

/// Success probability (n_from+1)/(5*n_from) of one expansion step at the
/// optimal reflectivities; tends to 1/5 for large n_from.
double analytic_probability(int n_from);

/// Closed-form total success probability of a cascade:
///   single photons, PDBS first:      n / 5^(n-1)
///   single photons, balanced first:  n / (4 * 5^(n-2))
///   EPR seed:                        n / (2 * 5^(n-2))
double analytic_cascade_probability(int n, SourceKind source, FirstElement first_element);

/// Success probability of the two-photon-ancilla expansion gate (Tashima
/// et al.), the comparison baseline: (2k+1)/2^(4k) for n = 2k+1 and
/// (k+1)/2^(4k) for n = 2(k+1). Defined for n >= 3.
double tashima_probability(int n);

}  // namespace wsim
