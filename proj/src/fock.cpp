#include "wsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace wsim {

OccupationVector::OccupationVector(std::vector<Entry> counts) {
  std::sort(counts.begin(), counts.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (const auto& [ch, n] : counts) {
    if (n < 0) throw Error("occupation count must be non-negative");
    if (n == 0) continue;
    if (!entries_.empty() && entries_.back().first == ch) {
      entries_.back().second += n;  // merge duplicate keys
    } else {
      entries_.push_back({ch, n});
    }
  }
}

int OccupationVector::count(ChannelId ch) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), ch,
      [](const Entry& e, const ChannelId& c) { return e.first < c; });
  return (it != entries_.end() && it->first == ch) ? it->second : 0;
}

int OccupationVector::total_photons() const {
  int total = 0;
  for (const auto& [ch, n] : entries_) total += n;
  return total;
}

int OccupationVector::photons_in_mode(int mode) const {
  int total = 0;
  for (const auto& [ch, n] : entries_)
    if (ch.mode == mode) total += n;
  return total;
}

std::vector<int> OccupationVector::modes() const {
  std::vector<int> out;
  for (const auto& [ch, n] : entries_)
    if (out.empty() || out.back() != ch.mode) out.push_back(ch.mode);
  return out;
}

OccupationVector OccupationVector::with_photons(ChannelId ch, int delta) const {
  std::vector<Entry> rebuilt;
  rebuilt.reserve(entries_.size() + 1);
  bool applied = false;
  for (const auto& [c, n] : entries_) {
    if (c == ch) {
      int updated = n + delta;
      if (updated < 0) throw Error("occupation count must be non-negative");
      if (updated > 0) rebuilt.push_back({c, updated});
      applied = true;
    } else {
      rebuilt.push_back({c, n});
    }
  }
  if (!applied) {
    if (delta < 0) throw Error("occupation count must be non-negative");
    if (delta > 0) rebuilt.push_back({ch, delta});
  }
  return OccupationVector(std::move(rebuilt));
}

std::string OccupationVector::str() const {
  if (entries_.empty()) return "|vac>";
  std::ostringstream os;
  os << '|';
  bool first = true;
  for (const auto& [ch, n] : entries_) {
    if (!first) os << ' ';
    first = false;
    if (n != 1) os << n << 'x';
    os << to_char(ch.pol) << ch.mode;
  }
  os << '>';
  return os.str();
}

StateVector::StateVector(TermMap terms, double tol) : tol_(tol) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (!std::isfinite(it->second.real()) || !std::isfinite(it->second.imag()))
      throw Error("amplitude must be finite");
    if (std::abs(it->second) <= tol_)
      it = terms.erase(it);
    else
      ++it;
  }
  terms_ = std::move(terms);
}

Amplitude StateVector::amplitude(const OccupationVector& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? Amplitude{0.0, 0.0} : it->second;
}

bool StateVector::uniform_photon_number() const {
  if (terms_.empty()) return true;
  const int expected = terms_.begin()->first.total_photons();
  for (const auto& [occ, amp] : terms_)
    if (occ.total_photons() != expected) return false;
  return true;
}

std::string StateVector::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [occ, amp] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << amp.real() << (amp.imag() < 0 ? "" : "+") << amp.imag() << "i)" << occ.str();
  }
  return os.str();
}

StateVector make_basis_state(const OccupationVector& occ) {
  StateVector::TermMap terms;
  terms[occ] = Amplitude{1.0, 0.0};
  return StateVector(std::move(terms));
}

StateVector tensor_product(const StateVector& s1, const StateVector& s2) {
  std::set<int> modes1;
  for (const auto& [occ, amp] : s1.terms())
    for (int m : occ.modes()) modes1.insert(m);
  for (const auto& [occ, amp] : s2.terms())
    for (int m : occ.modes())
      if (modes1.count(m))
        throw OverlappingModes("tensor_product: spatial mode " + std::to_string(m) +
                               " appears in both factors");

  StateVector::TermMap out;
  for (const auto& [occ1, amp1] : s1.terms()) {
    for (const auto& [occ2, amp2] : s2.terms()) {
      std::vector<OccupationVector::Entry> merged = occ1.entries();
      const auto& e2 = occ2.entries();
      merged.insert(merged.end(), e2.begin(), e2.end());
      out[OccupationVector(std::move(merged))] += amp1 * amp2;
    }
  }
  return StateVector(std::move(out), s1.tol());
}

Amplitude inner_product(const StateVector& bra, const StateVector& ket) {
  // iterate the smaller map, look up in the other
  const StateVector& small = bra.term_count() <= ket.term_count() ? bra : ket;
  Amplitude sum{0.0, 0.0};
  for (const auto& [occ, amp] : small.terms())
    sum += std::conj(bra.amplitude(occ)) * ket.amplitude(occ);
  return sum;
}

double norm(const StateVector& s) {
  double sq = 0.0;
  for (const auto& [occ, amp] : s.terms()) sq += std::norm(amp);
  return std::sqrt(sq);
}

StateVector normalize(const StateVector& s) {
  const double n = norm(s);
  if (n <= 1e-12) throw ZeroState("normalize: state has zero norm");
  return scaled(s, Amplitude{1.0 / n, 0.0});
}

double fidelity(const StateVector& s1, const StateVector& s2) {
  if (std::abs(norm(s1) - 1.0) > 1e-6 || std::abs(norm(s2) - 1.0) > 1e-6)
    throw NotNormalized("fidelity requires normalized states");
  return std::norm(inner_product(s1, s2));
}

StateVector permute_spatial_modes(const StateVector& s, const std::map<int, int>& perm) {
  std::set<int> present;
  for (const auto& [occ, amp] : s.terms())
    for (int m : occ.modes()) present.insert(m);

  auto image = [&perm](int mode) {
    auto it = perm.find(mode);
    return it == perm.end() ? mode : it->second;
  };
  std::set<int> targets;
  for (int m : present) {
    if (!targets.insert(image(m)).second)
      throw InvalidPermutation("permute_spatial_modes: map is not injective over present modes");
  }

  StateVector::TermMap out;
  for (const auto& [occ, amp] : s.terms()) {
    std::vector<OccupationVector::Entry> entries;
    entries.reserve(occ.entries().size());
    for (const auto& [ch, n] : occ.entries())
      entries.push_back({channel(image(ch.mode), ch.pol), n});
    out[OccupationVector(std::move(entries))] += amp;
  }
  return StateVector(std::move(out), s.tol());
}

StateVector scaled(const StateVector& s, Amplitude factor) {
  StateVector::TermMap out;
  for (const auto& [occ, amp] : s.terms()) out[occ] = amp * factor;
  return StateVector(std::move(out), s.tol());
}

StateVector phase_canonicalized(const StateVector& s) {
  if (s.empty()) return s;
  const Amplitude lead = s.terms().begin()->second;
  const double mag = std::abs(lead);
  return scaled(s, std::conj(lead) / mag);  // unit-modulus factor
}

}  // namespace wsim
