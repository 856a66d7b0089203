#include "wsim/postselect.hpp"

#include <cmath>

namespace wsim {

namespace {
constexpr double kZeroProbability = 1e-15;
}

DetectionPattern::DetectionPattern(std::map<int, int> required)
    : required_(std::move(required)) {
  for (const auto& [mode, count] : required_)
    if (count < 0) throw Error("DetectionPattern: counts must be non-negative");
}

bool DetectionPattern::matches(const OccupationVector& occ) const {
  for (const auto& [mode, want] : required_)
    if (occ.photons_in_mode(mode) != want) return false;
  return true;
}

DetectionPattern coincidence_pattern(const std::vector<int>& modes) {
  std::map<int, int> required;
  for (int m : modes) {
    if (!required.emplace(m, 1).second)
      throw DuplicateMode("coincidence_pattern: mode " + std::to_string(m) + " listed twice");
  }
  return DetectionPattern(std::move(required));
}

PostSelectionResult project(const StateVector& s, const DetectionPattern& pat) {
  if (std::abs(norm(s) - 1.0) > 1e-6)
    throw NotNormalized("project requires a normalized state");

  StateVector::TermMap kept;
  double probability = 0.0;
  for (const auto& [occ, amp] : s.terms()) {
    if (pat.matches(occ)) {
      kept[occ] = amp;
      probability += std::norm(amp);
    }
  }
  if (probability < kZeroProbability) return {probability, StateVector{}};
  return {probability, normalize(StateVector(std::move(kept), s.tol()))};
}

}  // namespace wsim
