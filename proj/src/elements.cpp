#include "wsim/elements.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace wsim {

namespace {

constexpr double kUnitaryTol = 1e-10;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_distinct(const std::vector<ChannelId>& channels, const char* what) {
  std::vector<ChannelId> sorted = channels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(std::string("ModeCoupling: duplicate ") + what + " channel");
}

int index_of(const std::vector<ChannelId>& channels, ChannelId ch) {
  auto it = std::find(channels.begin(), channels.end(), ch);
  if (it == channels.end()) throw Error("ModeCoupling: channel lookup failed");
  return static_cast<int>(it - channels.begin());
}

bool contains(const std::vector<ChannelId>& channels, ChannelId ch) {
  return std::find(channels.begin(), channels.end(), ch) != channels.end();
}

}  // namespace

Reflectivity::Reflectivity(double eta_h, double eta_v) : eta_h_(eta_h), eta_v_(eta_v) {
  if (!(eta_h >= 0.0 && eta_h <= 1.0) || !(eta_v >= 0.0 && eta_v <= 1.0))
    throw InvalidReflectivity("reflectivities must lie in [0, 1]");
}

Reflectivity Reflectivity::optimal() {
  const double root5 = std::sqrt(5.0);
  return Reflectivity((5.0 - root5) / 10.0, (5.0 + root5) / 10.0);
}

Reflectivity Reflectivity::balanced() { return Reflectivity(0.5, 0.5); }

bool Reflectivity::is_optimal(double tol) const {
  const Reflectivity ref = optimal();
  return std::abs(eta_h_ - ref.eta_h()) <= tol && std::abs(eta_v_ - ref.eta_v()) <= tol;
}

ModeCoupling::ModeCoupling(std::vector<ChannelId> channels, Eigen::MatrixXcd matrix)
    : ModeCoupling(channels, channels, std::move(matrix)) {}

ModeCoupling::ModeCoupling(std::vector<ChannelId> in, std::vector<ChannelId> out,
                           Eigen::MatrixXcd matrix)
    : in_(std::move(in)), out_(std::move(out)), u_(std::move(matrix)) {
  const auto m = static_cast<Eigen::Index>(in_.size());
  if (in_.size() != out_.size() || u_.rows() != m || u_.cols() != m)
    throw Error("ModeCoupling: matrix must be square over the channel lists");
  require_distinct(in_, "input");
  require_distinct(out_, "output");
  const Eigen::MatrixXcd gram = u_.adjoint() * u_;
  const double dev = (gram - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (!(dev <= kUnitaryTol))
    throw NonUnitary("ModeCoupling: matrix is not unitary (deviation " + std::to_string(dev) +
                     ")");
}

ModeCoupling ModeCoupling::identity(std::vector<ChannelId> channels) {
  const auto m = static_cast<Eigen::Index>(channels.size());
  return ModeCoupling(std::move(channels), Eigen::MatrixXcd::Identity(m, m));
}

ModeCoupling ModeCoupling::adjoint() const {
  return ModeCoupling(out_, in_, u_.adjoint());
}

std::string ModeCoupling::str() const {
  std::ostringstream os;
  os << "in:";
  for (const auto& ch : in_) os << ' ' << to_char(ch.pol) << ch.mode;
  os << "  out:";
  for (const auto& ch : out_) os << ' ' << to_char(ch.pol) << ch.mode;
  os << '\n';
  for (Eigen::Index r = 0; r < u_.rows(); ++r) {
    for (Eigen::Index c = 0; c < u_.cols(); ++c) {
      const Amplitude v = u_(r, c);
      os << (c ? "  " : "") << '(' << v.real() << ',' << v.imag() << ')';
    }
    os << '\n';
  }
  return os.str();
}

ModeCoupling pdbs(const Reflectivity& r, int in_a, int in_b, int out_c, int out_d) {
  if (in_a == in_b) throw Error("pdbs: input modes must be distinct");
  if (out_c == out_d) throw Error("pdbs: output modes must be distinct");

  std::vector<ChannelId> in = {channel(in_a, Polarization::H), channel(in_a, Polarization::V),
                               channel(in_b, Polarization::H), channel(in_b, Polarization::V)};
  std::vector<ChannelId> out = {channel(out_c, Polarization::H), channel(out_c, Polarization::V),
                                channel(out_d, Polarization::H), channel(out_d, Polarization::V)};
  std::sort(in.begin(), in.end());
  std::sort(out.begin(), out.end());

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  for (Polarization p : {Polarization::H, Polarization::V}) {
    const double eta = p == Polarization::H ? r.eta_h() : r.eta_v();
    const double t = std::sqrt(eta);
    const double s = std::sqrt(1.0 - eta);
    u(index_of(out, channel(out_c, p)), index_of(in, channel(in_a, p))) = t;
    u(index_of(out, channel(out_d, p)), index_of(in, channel(in_a, p))) = s;
    u(index_of(out, channel(out_c, p)), index_of(in, channel(in_b, p))) = s;
    u(index_of(out, channel(out_d, p)), index_of(in, channel(in_b, p))) = -t;
  }
  return ModeCoupling(std::move(in), std::move(out), std::move(u));
}

ModeCoupling hwp_zero(int mode) {
  std::vector<ChannelId> channels = {channel(mode, Polarization::H),
                                     channel(mode, Polarization::V)};
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2, 2);
  u(1, 1) = -1.0;
  return ModeCoupling(std::move(channels), std::move(u));
}

ModeCoupling compose(const ModeCoupling& last, const ModeCoupling& first) {
  // channels `last` consumes that `first` does not produce pass through the
  // first stage by identity
  std::vector<ChannelId> extra;
  for (const auto& ch : last.in_channels())
    if (!contains(first.out_channels(), ch)) extra.push_back(ch);
  for (const auto& ch : extra)
    if (contains(first.in_channels(), ch))
      throw Error("compose: channel is consumed by both elements");

  std::vector<ChannelId> in = first.in_channels();
  in.insert(in.end(), extra.begin(), extra.end());
  std::sort(in.begin(), in.end());
  std::vector<ChannelId> mid = first.out_channels();
  mid.insert(mid.end(), extra.begin(), extra.end());
  std::sort(mid.begin(), mid.end());

  const auto dim = static_cast<Eigen::Index>(in.size());
  Eigen::MatrixXcd u1 = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < first.in_channels().size(); ++k)
    for (std::size_t j = 0; j < first.out_channels().size(); ++j)
      u1(index_of(mid, first.out_channels()[j]), index_of(in, first.in_channels()[k])) =
          first.matrix()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  for (const auto& ch : extra) u1(index_of(mid, ch), index_of(in, ch)) = 1.0;

  // mid channels the second element leaves alone
  std::vector<ChannelId> spectators;
  for (const auto& ch : mid)
    if (!contains(last.in_channels(), ch)) spectators.push_back(ch);
  for (const auto& ch : spectators)
    if (contains(last.out_channels(), ch))
      throw Error("compose: output channel collides with a pass-through channel");

  std::vector<ChannelId> out = last.out_channels();
  out.insert(out.end(), spectators.begin(), spectators.end());
  std::sort(out.begin(), out.end());

  Eigen::MatrixXcd u2 = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < last.in_channels().size(); ++k)
    for (std::size_t j = 0; j < last.out_channels().size(); ++j)
      u2(index_of(out, last.out_channels()[j]), index_of(mid, last.in_channels()[k])) =
          last.matrix()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  for (const auto& ch : spectators) u2(index_of(out, ch), index_of(mid, ch)) = 1.0;

  return ModeCoupling(std::move(in), std::move(out), u2 * u1);
}

StateVector apply_element(const StateVector& s, const ModeCoupling& e) {
  const auto& in = e.in_channels();
  const auto& out = e.out_channels();
  const auto& u = e.matrix();
  const int m = static_cast<int>(in.size());

  StateVector::TermMap result;
  for (const auto& [occ, amp] : s.terms()) {
    std::vector<int> n(m, 0);
    std::vector<OccupationVector::Entry> rest;
    for (const auto& [ch, cnt] : occ.entries()) {
      auto it = std::find(in.begin(), in.end(), ch);
      if (it != in.end()) {
        n[it - in.begin()] = cnt;
      } else {
        if (contains(out, ch))
          throw OverlappingModes("apply_element: output channel already occupied by a spectator");
        rest.push_back({ch, cnt});
      }
    }

    const int photons = std::accumulate(n.begin(), n.end(), 0);
    if (photons == 0) {
      result[occ] += amp;
      continue;
    }

    // expand prod_k (sum_j U(j,k) b_j)^(n_k) over output monomials
    std::map<std::vector<int>, Amplitude> poly;
    poly[std::vector<int>(m, 0)] = Amplitude{1.0, 0.0};
    for (int k = 0; k < m; ++k) {
      for (int rep = 0; rep < n[k]; ++rep) {
        std::map<std::vector<int>, Amplitude> next;
        for (const auto& [mono, coeff] : poly) {
          for (int j = 0; j < m; ++j) {
            const Amplitude w = u(j, k);
            if (w == Amplitude{0.0, 0.0}) continue;
            std::vector<int> bumped = mono;
            ++bumped[j];
            next[std::move(bumped)] += coeff * w;
          }
        }
        poly = std::move(next);
      }
    }

    double in_fact = 1.0;
    for (int k = 0; k < m; ++k) in_fact *= factorial(n[k]);

    for (const auto& [mono, coeff] : poly) {
      double out_fact = 1.0;
      for (int j = 0; j < m; ++j) out_fact *= factorial(mono[j]);
      std::vector<OccupationVector::Entry> entries = rest;
      for (int j = 0; j < m; ++j)
        if (mono[j] > 0) entries.push_back({out[j], mono[j]});
      result[OccupationVector(std::move(entries))] +=
          amp * coeff * std::sqrt(out_fact / in_fact);
    }
  }
  return StateVector(std::move(result), s.tol());
}

Amplitude detail::permanent_sum(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return Amplitude{1.0, 0.0};
  std::vector<int> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  Amplitude sum{0.0, 0.0};
  do {
    Amplitude prod{1.0, 0.0};
    for (int i = 0; i < n; ++i) prod *= m(i, cols[i]);
    sum += prod;
  } while (std::next_permutation(cols.begin(), cols.end()));
  return sum;
}

Amplitude detail::permanent_ryser(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return Amplitude{1.0, 0.0};
  Amplitude sum{0.0, 0.0};
  const unsigned full = 1u << n;
  for (unsigned mask = 1; mask < full; ++mask) {
    Amplitude rowprod{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
      Amplitude rowsum{0.0, 0.0};
      for (int j = 0; j < n; ++j)
        if (mask & (1u << j)) rowsum += m(i, j);
      rowprod *= rowsum;
    }
    const int popcount = __builtin_popcount(mask);
    sum += ((n - popcount) % 2 == 0) ? rowprod : -rowprod;
  }
  return sum;
}

Amplitude permanent(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw Error("permanent: matrix must be square");
  const int n = static_cast<int>(m.rows());
  if (n <= 4) return detail::permanent_sum(m);
  if (n <= 6) return detail::permanent_ryser(m);
  throw Error("permanent: matrices above 6x6 are not supported");
}

Amplitude amplitude_oracle(const ModeCoupling& e, const OccupationVector& in_occ,
                           const OccupationVector& out_occ) {
  for (const auto& [ch, cnt] : in_occ.entries())
    if (!contains(e.in_channels(), ch))
      throw Error("amplitude_oracle: input occupation outside the element's channels");
  for (const auto& [ch, cnt] : out_occ.entries())
    if (!contains(e.out_channels(), ch))
      throw Error("amplitude_oracle: output occupation outside the element's channels");

  const int photons = in_occ.total_photons();
  if (photons != out_occ.total_photons())
    throw PhotonNumberMismatch("amplitude_oracle: photon totals differ");
  if (photons > 6) throw Error("amplitude_oracle: more than 6 photons");
  if (photons == 0) return Amplitude{1.0, 0.0};

  std::vector<int> cols, rows;
  for (const auto& [ch, cnt] : in_occ.entries())
    cols.insert(cols.end(), cnt, index_of(e.in_channels(), ch));
  for (const auto& [ch, cnt] : out_occ.entries())
    rows.insert(rows.end(), cnt, index_of(e.out_channels(), ch));

  Eigen::MatrixXcd sub(photons, photons);
  for (int r = 0; r < photons; ++r)
    for (int c = 0; c < photons; ++c) sub(r, c) = e.matrix()(rows[r], cols[c]);

  double fact = 1.0;
  for (const auto& [ch, cnt] : in_occ.entries()) fact *= factorial(cnt);
  for (const auto& [ch, cnt] : out_occ.entries()) fact *= factorial(cnt);
  return permanent(sub) / std::sqrt(fact);
}

}  // namespace wsim
