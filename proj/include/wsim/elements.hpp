#pragma once

// Linear optical elements as unitary couplings on channels, the bosonic
// application algorithm, and an independent permanent-based amplitude oracle.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wsim/fock.hpp"

namespace wsim {

/// Beam-splitter reflectivities for H and V polarized light, each in [0, 1].
class Reflectivity {
 public:
  Reflectivity(double eta_h, double eta_v);

  double eta_h() const { return eta_h_; }
  double eta_v() const { return eta_v_; }

  /// (5-sqrt(5))/10 and (5+sqrt(5))/10: the unique pair (up to polarization
  /// relabeling) for which the one-photon expansion gate emits exact W
  /// states. Recovered independently by solve_closed_form and the grid
  /// optimizer.
  static Reflectivity optimal();

  /// Polarization-independent 50:50 splitter.
  static Reflectivity balanced();

  bool is_optimal(double tol = 1e-12) const;

 private:
  double eta_h_;
  double eta_v_;
};

/// A unitary acting on creation operators over a finite channel set:
/// a_dag(in[k]) -> sum_j U(j,k) a_dag(out[j]). Input and output channel
/// lists usually coincide; they may differ for relabeling elements.
/// Validated unitary at construction (U^dag U = I within 1e-10 entry-wise).
class ModeCoupling {
 public:
  ModeCoupling(std::vector<ChannelId> channels, Eigen::MatrixXcd matrix);
  ModeCoupling(std::vector<ChannelId> in, std::vector<ChannelId> out, Eigen::MatrixXcd matrix);

  static ModeCoupling identity(std::vector<ChannelId> channels);

  const std::vector<ChannelId>& in_channels() const { return in_; }
  const std::vector<ChannelId>& out_channels() const { return out_; }
  const Eigen::MatrixXcd& matrix() const { return u_; }

  /// Inverse element: conjugate-transpose matrix with in/out swapped.
  ModeCoupling adjoint() const;

  /// Row-major matrix with channel headers, for debugging.
  std::string str() const;

 private:
  std::vector<ChannelId> in_;
  std::vector<ChannelId> out_;
  Eigen::MatrixXcd u_;
};

/// Polarization-dependent beam splitter over modes {a, b} -> {c, d}:
/// per polarization p with reflectivity eta_p,
///   a_p -> sqrt(eta_p) c_p + sqrt(1-eta_p) d_p
///   b_p -> sqrt(1-eta_p) c_p - sqrt(eta_p) d_p
/// The matrix is real orthogonal. In-place relabeling (a==c, b==d) is the
/// common use.
ModeCoupling pdbs(const Reflectivity& r, int in_a, int in_b, int out_c, int out_d);

/// Half-wave plate at 0 degrees: diag(1, -1) on (mode,H), (mode,V).
ModeCoupling hwp_zero(int mode);

/// Fused element equal to applying `first` and then `last`. Channel sets are
/// unioned; channels missing from either element extend by identity.
ModeCoupling compose(const ModeCoupling& last, const ModeCoupling& first);

/// Evolves a state through an element. Each input occupation over the
/// element's channels is expanded multinomially through the creation-operator
/// substitution, carrying the bosonic sqrt(n!) factors; channels outside the
/// element pass through untouched. Norm-preserving.
StateVector apply_element(const StateVector& s, const ModeCoupling& e);

/// Independent transition-amplitude oracle:
///   per(U[out, in]) / sqrt(prod in_k! * prod out_j!)
/// where U[out, in] repeats column k in_k times and row j out_j times.
/// Computed via a permanent (permutation sum <= 4 photons, Ryser for 5-6),
/// not via the expansion path of apply_element. Throws PhotonNumberMismatch
/// when totals differ; photon numbers above 6 are rejected.
Amplitude amplitude_oracle(const ModeCoupling& e, const OccupationVector& in_occ,
                           const OccupationVector& out_occ);

/// Matrix permanent, dispatching on size: permutation sum for n <= 4,
/// Ryser's formula for n = 5..6. Larger matrices are rejected.
Amplitude permanent(const Eigen::MatrixXcd& m);

namespace detail {
Amplitude permanent_sum(const Eigen::MatrixXcd& m);
Amplitude permanent_ryser(const Eigen::MatrixXcd& m);
}  // namespace detail

}  // namespace wsim
