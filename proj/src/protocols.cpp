#include "wsim/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wsim {

namespace {

std::vector<int> occupied_modes(const StateVector& s) {
  std::set<int> modes;
  for (const auto& [occ, amp] : s.terms())
    for (int m : occ.modes()) modes.insert(m);
  return {modes.begin(), modes.end()};
}

}  // namespace

void CascadeSpec::validate() const {
  if (target_n < 2) throw InvalidSpec("cascade target must be at least 2 photons");
  if (source == SourceKind::EprSeed && target_n < 3)
    throw InvalidSpec("the EPR seed already is a 2-photon W state; target must be >= 3");
  if (source == SourceKind::EprSeed && first_element == FirstElement::Balanced)
    throw InvalidSpec("the balanced first element applies to the single-photon source only");
}

StateVector build_w(int n) {
  if (n < 1) throw InvalidN("build_w requires n >= 1");
  StateVector::TermMap terms;
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (int v_at = 0; v_at < n; ++v_at) {
    std::vector<OccupationVector::Entry> entries;
    entries.reserve(n);
    for (int mode = 0; mode < n; ++mode)
      entries.push_back({channel(mode, mode == v_at ? Polarization::V : Polarization::H), 1});
    terms[OccupationVector(std::move(entries))] = Amplitude{amp, 0.0};
  }
  return StateVector(std::move(terms));
}

StateVector build_epr() { return build_w(2); }

ExpansionReport expand_once(const StateVector& s, int attach_mode, const Reflectivity& r) {
  if (std::abs(norm(s) - 1.0) > 1e-6)
    throw NotNormalized("expand_once requires a normalized input state");
  for (const auto& [occ, amp] : s.terms())
    if (occ.photons_in_mode(attach_mode) != 1)
      throw NotSingleOccupied("expand_once: attach mode must hold exactly one photon in every term");

  std::vector<int> modes = occupied_modes(s);
  const int n = static_cast<int>(modes.size());
  const int ancilla = modes.back() + 1;

  StateVector joint = tensor_product(
      s, make_basis_state(OccupationVector::single(channel(ancilla, Polarization::H))));
  StateVector evolved =
      apply_element(joint, pdbs(r, attach_mode, ancilla, attach_mode, ancilla));
  evolved = apply_element(evolved, hwp_zero(attach_mode));

  std::vector<int> all_modes = modes;
  all_modes.push_back(ancilla);
  PostSelectionResult sel = project(evolved, coincidence_pattern(all_modes));

  StateVector output = sel.state;
  if (!output.empty()) {
    std::map<int, int> relabel;
    for (int i = 0; i < static_cast<int>(all_modes.size()); ++i) relabel[all_modes[i]] = i;
    output = permute_spatial_modes(output, relabel);
  }

  const double fid = output.empty() ? 0.0 : fidelity(output, build_w(n + 1));
  const double analytic = r.is_optimal() ? analytic_probability(n) : sel.probability;
  return {sel.probability, analytic, fid, output, 1};
}

ExpansionReport run_cascade(const CascadeSpec& spec) {
  std::vector<CascadeStage> trace;
  return run_cascade(spec, trace);
}

ExpansionReport run_cascade(const CascadeSpec& spec, std::vector<CascadeStage>& trace) {
  spec.validate();
  trace.clear();

  StateVector state;
  double total = 1.0;
  int steps = 0;
  auto record = [&](double probability, const StateVector& st, int photons) {
    total *= probability;
    ++steps;
    const double fid = st.empty() ? 0.0 : fidelity(st, build_w(photons));
    trace.push_back({steps, probability, total, fid});
  };

  if (spec.source == SourceKind::SinglePhotons) {
    // |V>_0 |H>_1 through the first element, then the wave plate, then the
    // twofold coincidence
    StateVector seed = tensor_product(
        make_basis_state(OccupationVector::single(channel(0, Polarization::V))),
        make_basis_state(OccupationVector::single(channel(1, Polarization::H))));
    const Reflectivity first_r = spec.first_element == FirstElement::Balanced
                                     ? Reflectivity::balanced()
                                     : spec.reflectivity;
    StateVector evolved = apply_element(seed, pdbs(first_r, 0, 1, 0, 1));
    evolved = apply_element(evolved, hwp_zero(0));
    PostSelectionResult sel = project(evolved, coincidence_pattern({0, 1}));
    state = sel.state;
    record(sel.probability, state, 2);
  } else {
    state = build_epr();
  }

  for (int photons = 2; photons < spec.target_n && !state.empty(); ++photons) {
    ExpansionReport step = expand_once(state, photons - 1, spec.reflectivity);
    state = step.output_state;
    record(step.success_probability, state, photons + 1);
  }

  const double fid = state.empty() ? 0.0 : fidelity(state, build_w(spec.target_n));
  const double analytic =
      spec.reflectivity.is_optimal()
          ? analytic_cascade_probability(spec.target_n, spec.source, spec.first_element)
          : total;
  return {total, analytic, fid, state, steps};
}

double analytic_probability(int n_from) {
  if (n_from < 1) throw InvalidN("analytic_probability requires n_from >= 1");
  return (n_from + 1) / (5.0 * n_from);
}

double analytic_cascade_probability(int n, SourceKind source, FirstElement first_element) {
  CascadeSpec probe{n, source, first_element, Reflectivity::optimal()};
  probe.validate();  // same validity rules; throws InvalidSpec
  if (source == SourceKind::EprSeed) return n / (2.0 * std::pow(5.0, n - 2));
  if (first_element == FirstElement::Balanced) return n / (4.0 * std::pow(5.0, n - 2));
  return n / std::pow(5.0, n - 1);
}

double tashima_probability(int n) {
  if (n < 3) throw InvalidN("tashima_probability is defined for n >= 3");
  if (n % 2 == 1) {
    const int k = (n - 1) / 2;
    return (2.0 * k + 1.0) / std::pow(2.0, 4 * k);
  }
  const int k = n / 2 - 1;
  return (k + 1.0) / std::pow(2.0, 4 * k);
}

}  // namespace wsim
