#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "wsim/elements.hpp"

using namespace wsim;
using Polarization::H;
using Polarization::V;

namespace {

const double kInvSqrt5 = 1.0 / std::sqrt(5.0);

OccupationVector occ(std::vector<OccupationVector::Entry> entries) {
  return OccupationVector(std::move(entries));
}

StateVector basis(std::vector<OccupationVector::Entry> entries) {
  return make_basis_state(occ(std::move(entries)));
}

/// All compositions of `photons` photons over `channels`.
void enumerate_occupations(const std::vector<ChannelId>& channels, int photons,
                           std::vector<OccupationVector>& out,
                           std::vector<OccupationVector::Entry> partial = {}, int from = 0) {
  if (from == static_cast<int>(channels.size())) {
    if (photons == 0) out.push_back(OccupationVector(partial));
    return;
  }
  for (int take = 0; take <= photons; ++take) {
    auto next = partial;
    if (take > 0) next.push_back({channels[from], take});
    enumerate_occupations(channels, photons - take, out, next, from + 1);
  }
}

}  // namespace

TEST_CASE("reflectivity validation and named values") {
  CHECK_THROWS_AS(Reflectivity(-0.1, 0.5), InvalidReflectivity);
  CHECK_THROWS_AS(Reflectivity(0.5, 1.1), InvalidReflectivity);

  const Reflectivity r = Reflectivity::optimal();
  CHECK(r.eta_h() == doctest::Approx((5.0 - std::sqrt(5.0)) / 10.0).epsilon(1e-15));
  CHECK(r.eta_v() == doctest::Approx((5.0 + std::sqrt(5.0)) / 10.0).epsilon(1e-15));
  CHECK(r.is_optimal());
  CHECK_FALSE(Reflectivity::balanced().is_optimal());
}

TEST_CASE("pdbs matrix entries") {
  const ModeCoupling e = pdbs(Reflectivity::optimal(), 0, 1, 0, 1);
  auto entry = [&](ChannelId out_ch, ChannelId in_ch) {
    int row = -1, col = -1;
    for (int i = 0; i < 4; ++i) {
      if (e.out_channels()[i] == out_ch) row = i;
      if (e.in_channels()[i] == in_ch) col = i;
    }
    REQUIRE(row >= 0);
    REQUIRE(col >= 0);
    return e.matrix()(row, col);
  };
  CHECK(entry(channel(0, H), channel(0, H)).real() == doctest::Approx(0.525731).epsilon(1e-6));
  CHECK(entry(channel(1, V), channel(0, V)).real() ==
        doctest::Approx(std::sqrt(1.0 - (5.0 + std::sqrt(5.0)) / 10.0)));
  CHECK(entry(channel(1, H), channel(1, H)).real() ==
        doctest::Approx(-std::sqrt((5.0 - std::sqrt(5.0)) / 10.0)));

  // full mirror: a -> c, b -> -d
  const ModeCoupling mirror = pdbs(Reflectivity(1.0, 1.0), 0, 1, 0, 1);
  StateVector through = apply_element(basis({{channel(0, V), 1}, {channel(1, H), 1}}), mirror);
  CHECK(through.amplitude(occ({{channel(0, V), 1}, {channel(1, H), 1}})).real() ==
        doctest::Approx(-1.0));

  // balanced splitter: every entry magnitude 1/sqrt(2)
  const ModeCoupling bal = pdbs(Reflectivity::balanced(), 0, 1, 0, 1);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const double mag = std::abs(bal.matrix()(r, c));
      if (mag > 0.0) CHECK(mag == doctest::Approx(1.0 / std::sqrt(2.0)));
    }

  CHECK_THROWS_AS(pdbs(Reflectivity::balanced(), 0, 0, 1, 2), Error);
}

TEST_CASE("pdbs matrices are orthogonal for random reflectivities") {
  auto rng = testsupport::make_rng(331);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ModeCoupling e = pdbs(Reflectivity(unit(rng), unit(rng)), 0, 1, 0, 1);
    const Eigen::MatrixXcd gram = e.matrix() * e.matrix().transpose();
    CHECK((gram - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("hwp_zero flips V only and is an involution") {
  const ModeCoupling w = hwp_zero(0);
  StateVector h = apply_element(basis({{channel(0, H), 1}}), w);
  CHECK(h.amplitude(occ({{channel(0, H), 1}})).real() == doctest::Approx(1.0));
  StateVector v = apply_element(basis({{channel(0, V), 1}}), w);
  CHECK(v.amplitude(occ({{channel(0, V), 1}})).real() == doctest::Approx(-1.0));
  StateVector twice = apply_element(v, w);
  CHECK(twice.amplitude(occ({{channel(0, V), 1}})).real() == doctest::Approx(1.0));
}

TEST_CASE("non-unitary matrices are rejected") {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2) * 0.9;
  CHECK_THROWS_AS(ModeCoupling({channel(0, H), channel(0, V)}, bad), NonUnitary);
}

TEST_CASE("two-photon transformations through the gate") {
  const Reflectivity r = Reflectivity::optimal();
  const ModeCoupling gate = compose(hwp_zero(0), pdbs(r, 0, 1, 0, 1));

  // |H>_a |H>_b: the coincidence coefficient is 1 - 2 eta_h = 1/sqrt(5)
  StateVector hh = apply_element(basis({{channel(0, H), 1}, {channel(1, H), 1}}), gate);
  CHECK(hh.amplitude(occ({{channel(0, H), 1}, {channel(1, H), 1}})).real() ==
        doctest::Approx(kInvSqrt5).epsilon(1e-12));

  // |V>_a |H>_b: both coincidence coefficients equal +1/sqrt(5)
  StateVector vh = apply_element(basis({{channel(0, V), 1}, {channel(1, H), 1}}), gate);
  CHECK(vh.amplitude(occ({{channel(0, H), 1}, {channel(1, V), 1}})).real() ==
        doctest::Approx(kInvSqrt5).epsilon(1e-12));
  CHECK(vh.amplitude(occ({{channel(0, V), 1}, {channel(1, H), 1}})).real() ==
        doctest::Approx(kInvSqrt5).epsilon(1e-12));

  // Hong-Ou-Mandel: balanced splitter kills the same-polarization coincidence
  StateVector hom = apply_element(basis({{channel(0, H), 1}, {channel(1, H), 1}}),
                                  pdbs(Reflectivity::balanced(), 0, 1, 0, 1));
  CHECK(std::abs(hom.amplitude(occ({{channel(0, H), 1}, {channel(1, H), 1}}))) < 1e-12);
}

TEST_CASE("relabeling variant routes to fresh output modes") {
  const ModeCoupling gate =
      compose(hwp_zero(2), pdbs(Reflectivity::optimal(), 0, 1, 2, 3));
  StateVector hh = apply_element(basis({{channel(0, H), 1}, {channel(1, H), 1}}), gate);
  CHECK(hh.amplitude(occ({{channel(2, H), 1}, {channel(3, H), 1}})).real() ==
        doctest::Approx(kInvSqrt5).epsilon(1e-12));

  // spectators colliding with output channels are rejected
  StateVector occupied = basis({{channel(0, H), 1}, {channel(1, H), 1}, {channel(2, H), 1}});
  CHECK_THROWS_AS(apply_element(occupied, pdbs(Reflectivity::optimal(), 0, 1, 2, 3)),
                  OverlappingModes);
}

TEST_CASE("compose basics") {
  const std::vector<ChannelId> chans = {channel(0, H), channel(0, V)};
  const ModeCoupling id2 = ModeCoupling::identity(chans);
  const ModeCoupling w = hwp_zero(0);

  const ModeCoupling same = compose(id2, w);
  CHECK((same.matrix() - w.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  const ModeCoupling twice = compose(w, w);
  CHECK((twice.matrix() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("composed element equals sequential application on random states") {
  auto rng = testsupport::make_rng(332);
  const std::vector<ChannelId> channels = {channel(0, H), channel(0, V), channel(1, H),
                                           channel(1, V)};
  const ModeCoupling fused = compose(hwp_zero(0), pdbs(Reflectivity::optimal(), 0, 1, 0, 1));
  for (int trial = 0; trial < 40; ++trial) {
    StateVector s = testsupport::random_state(channels, 3, 5, rng);
    StateVector sequential =
        apply_element(apply_element(s, pdbs(Reflectivity::optimal(), 0, 1, 0, 1)), hwp_zero(0));
    StateVector one_shot = apply_element(s, fused);
    CHECK(fidelity(normalize(sequential), normalize(one_shot)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [o, amp] : sequential.terms())
      CHECK(std::abs(amp - one_shot.amplitude(o)) < 1e-10);
  }
}

TEST_CASE("permanents") {
  Eigen::MatrixXcd m(2, 2);
  m << Amplitude{1, 1}, Amplitude{2, 0}, Amplitude{0, 1}, Amplitude{1, -1};
  // per = a11*a22 + a12*a21 = (1+i)(1-i) + 2i = 2 + 2i
  CHECK(std::abs(permanent(m) - Amplitude{2, 2}) < 1e-14);

  auto rng = testsupport::make_rng(333);
  for (int n : {5, 6}) {
    const Eigen::MatrixXcd u = testsupport::random_unitary(n, rng);
    CHECK(std::abs(detail::permanent_sum(u) - detail::permanent_ryser(u)) < 1e-12);
  }
  CHECK_THROWS_AS(permanent(Eigen::MatrixXcd::Identity(7, 7)), Error);
}

TEST_CASE("amplitude oracle on hand-checked cases") {
  const ModeCoupling bal = pdbs(Reflectivity::balanced(), 0, 1, 0, 1);
  const OccupationVector two_singles = occ({{channel(0, H), 1}, {channel(1, H), 1}});
  CHECK(std::abs(amplitude_oracle(bal, two_singles, two_singles)) < 1e-12);
  CHECK(amplitude_oracle(bal, two_singles, occ({{channel(0, H), 2}})).real() ==
        doctest::Approx(1.0 / std::sqrt(2.0)));

  const ModeCoupling id2 = ModeCoupling::identity({channel(0, H), channel(0, V)});
  const OccupationVector any = occ({{channel(0, H), 2}, {channel(0, V), 1}});
  CHECK(amplitude_oracle(id2, any, any).real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(amplitude_oracle(bal, two_singles, occ({{channel(0, H), 1}})),
                  PhotonNumberMismatch);
}

TEST_CASE("random elements: norm preservation, oracle equivalence, photon conservation") {
  auto rng = testsupport::make_rng(334);
  std::uniform_int_distribution<int> channel_count(2, 4);
  int oracle_checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = channel_count(rng);
    std::vector<ChannelId> channels;
    for (int i = 0; i < m; ++i)
      channels.push_back(channel(i / 2, i % 2 == 0 ? H : V));
    const ModeCoupling e(channels, testsupport::random_unitary(m, rng));

    StateVector s = testsupport::random_state(channels, 4, 5, rng);
    StateVector evolved = apply_element(s, e);
    CHECK(std::abs(norm(evolved) - norm(s)) < 1e-10);

    // term-by-term photon conservation on a basis input, plus oracle agreement
    OccupationVector in_occ = testsupport::random_occupation(channels, 4, rng);
    StateVector out = apply_element(make_basis_state(in_occ), e);
    std::vector<OccupationVector> all_outputs;
    enumerate_occupations(channels, in_occ.total_photons(), all_outputs);
    for (const auto& candidate : all_outputs) {
      CHECK(candidate.total_photons() == in_occ.total_photons());
      const Amplitude via_expansion = out.amplitude(candidate);
      const Amplitude via_permanent = amplitude_oracle(e, in_occ, candidate);
      CHECK(std::abs(via_expansion - via_permanent) < 1e-10);
      ++oracle_checks;
    }
  }
  CHECK(oracle_checks > 200);
}

TEST_CASE("adjoint element inverts the evolution") {
  auto rng = testsupport::make_rng(335);
  const std::vector<ChannelId> channels = {channel(0, H), channel(0, V), channel(1, H)};
  for (int trial = 0; trial < 30; ++trial) {
    const ModeCoupling e(channels, testsupport::random_unitary(3, rng));
    StateVector s = testsupport::random_state(channels, 3, 4, rng);
    StateVector round_trip = apply_element(apply_element(s, e), e.adjoint());
    for (const auto& [o, amp] : s.terms())
      CHECK(std::abs(round_trip.amplitude(o) - amp) < 1e-9);
  }
}
