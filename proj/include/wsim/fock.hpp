#pragma once

// State algebra for multiphoton polarization-encoded states: occupation
// labels, sparse superpositions, inner products, fidelity, mode relabeling.

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wsim/errors.hpp"

namespace wsim {

/// Photon polarization. H encodes logical 0, V encodes logical 1.
enum class Polarization : std::uint8_t { H = 0, V = 1 };

constexpr char to_char(Polarization p) { return p == Polarization::H ? 'H' : 'V'; }

/// One optical channel: a spatial mode paired with a polarization.
/// Totally ordered by (mode, pol) with H < V.
struct ChannelId {
  int mode = 0;
  Polarization pol = Polarization::H;

  friend constexpr auto operator<=>(const ChannelId&, const ChannelId&) = default;
};

constexpr ChannelId channel(int mode, Polarization pol) { return ChannelId{mode, pol}; }

/// Fock basis label: photon count per channel, stored sorted and zero-free.
/// Equality and ordering act on the canonical form, so iteration over any
/// container keyed by OccupationVector is deterministic.
class OccupationVector {
 public:
  using Entry = std::pair<ChannelId, int>;

  OccupationVector() = default;  // vacuum
  explicit OccupationVector(std::vector<Entry> counts);

  static OccupationVector single(ChannelId ch) { return OccupationVector({{ch, 1}}); }

  int count(ChannelId ch) const;
  int total_photons() const;
  /// Photons in a spatial mode, summed over both polarizations.
  int photons_in_mode(int mode) const;
  /// Sorted list of occupied spatial modes.
  std::vector<int> modes() const;

  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Copy with `delta` photons added to `ch` (delta may be negative as long
  /// as the resulting count stays non-negative).
  OccupationVector with_photons(ChannelId ch, int delta) const;

  std::string str() const;

  friend auto operator<=>(const OccupationVector&, const OccupationVector&) = default;

 private:
  std::vector<Entry> entries_;
};

using Amplitude = std::complex<double>;

/// Sparse pure state: occupation labels mapped to complex amplitudes.
/// Values are immutable after construction; every operation returns a new
/// state. Amplitudes with magnitude <= tol are dropped at construction.
class StateVector {
 public:
  static constexpr double kDefaultTol = 1e-12;
  using TermMap = std::map<OccupationVector, Amplitude>;

  StateVector() = default;  // zero state
  explicit StateVector(TermMap terms, double tol = kDefaultTol);

  const TermMap& terms() const { return terms_; }
  double tol() const { return tol_; }
  std::size_t term_count() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Amplitude of a basis label, zero when absent.
  Amplitude amplitude(const OccupationVector& occ) const;

  /// True when all stored terms carry the same total photon number
  /// (vacuously true for the zero state).
  bool uniform_photon_number() const;

  std::string str() const;

 private:
  TermMap terms_;
  double tol_ = kDefaultTol;
};

/// Single-term state occ -> 1+0i.
StateVector make_basis_state(const OccupationVector& occ);

/// Term-wise product of states on disjoint spatial mode sets.
/// Throws OverlappingModes if any spatial mode appears in both.
StateVector tensor_product(const StateVector& s1, const StateVector& s2);

/// Sum of conj(bra[occ]) * ket[occ] over shared occupations.
Amplitude inner_product(const StateVector& bra, const StateVector& ket);

double norm(const StateVector& s);

/// Same ray scaled to unit norm. Throws ZeroState when norm <= 1e-12.
StateVector normalize(const StateVector& s);

/// |<s1|s2>|^2 for normalized inputs. Throws NotNormalized when either norm
/// deviates from 1 by more than 1e-6.
double fidelity(const StateVector& s1, const StateVector& s2);

/// Relabels spatial modes through `perm`; modes not listed stay fixed.
/// Throws InvalidPermutation unless the effective map is injective over the
/// modes present.
StateVector permute_spatial_modes(const StateVector& s, const std::map<int, int>& perm);

StateVector scaled(const StateVector& s, Amplitude factor);

/// Divides out the phase of the amplitude on the lexicographically smallest
/// occupation, giving a stable representative for printing. Fidelity and all
/// physics are phase-blind; this exists for reproducible dumps only.
StateVector phase_canonicalized(const StateVector& s);

}  // namespace wsim
