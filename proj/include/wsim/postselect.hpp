#pragma once

// Photon-number post-selection: project onto a detection pattern, report the
// success probability and the normalized conditional state.

#include <map>
#include <vector>

#include "wsim/fock.hpp"

namespace wsim {

/// Required total photon count per spatial mode (summed over polarization).
/// Modes absent from the map are unconstrained. Detectors are ideal:
/// number-resolving and polarization-insensitive.
class DetectionPattern {
 public:
  DetectionPattern() = default;  // no constraint
  explicit DetectionPattern(std::map<int, int> required);

  bool matches(const OccupationVector& occ) const;
  const std::map<int, int>& required() const { return required_; }

 private:
  std::map<int, int> required_;
};

/// Pattern requiring exactly one photon in each listed mode.
/// Throws DuplicateMode on repeats.
DetectionPattern coincidence_pattern(const std::vector<int>& modes);

struct PostSelectionResult {
  double probability = 0.0;  // squared norm of the projected branch
  StateVector state;         // normalized conditional state; empty when the
                             // probability falls below 1e-15
};

/// Keeps exactly the terms matching `pat`. Requires a normalized input.
PostSelectionResult project(const StateVector& s, const DetectionPattern& pat);

}  // namespace wsim
