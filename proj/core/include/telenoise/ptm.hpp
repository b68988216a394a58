#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "telenoise/errors.hpp"
#include "telenoise/tolerances.hpp"

namespace telenoise {

using Mat2c = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;

/// Index order of the Pauli basis used everywhere in this library.
enum class Pauli : int { I = 0, X = 1, Y = 2, Z = 3 };

/// Coherence axes (the Pauli by which row and column labels differ).
enum class Axis : int { X = 1, Y = 2, Z = 3 };

constexpr int index(Pauli p) { return static_cast<int>(p); }
constexpr std::array<Pauli, 4> kPaulis{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

const char* to_string(Pauli p);
const char* to_string(Axis a);

/// Unsigned product of two Paulis (phases dropped): X*Y -> Z etc.
Pauli pauli_product(Pauli a, Pauli b);

/// Dense 2x2 matrix of a single-qubit Pauli.
Mat2c pauli_matrix(Pauli p);

/// Weighted Kraus decomposition of a single-qubit channel:
/// E(rho) = sum_k w_k E_k rho E_k^dag. Empty weights mean all ones.
struct KrausSet {
  std::vector<Mat2c> ops;
  std::vector<double> weights;

  double weight(std::size_t k) const {
    return weights.empty() ? 1.0 : weights[k];
  }
};

/// Completeness defect max|sum_k w_k E_k^dag E_k - I|.
double completeness_defect(const KrausSet& k);

/// Pauli transfer matrix of a single-qubit channel: a real 4x4 matrix in
/// the (I, X, Y, Z) basis. Diagonal iff the channel is a Pauli channel.
struct Ptm {
  Mat4 m = Mat4::Identity();

  double operator()(Pauli r, Pauli c) const { return m(index(r), index(c)); }
  double& operator()(Pauli r, Pauli c) { return m(index(r), index(c)); }

  static Ptm identity() { return Ptm{}; }
  /// Conjugation by a single Pauli (diagonal, entries +-1).
  static Ptm pauli_unitary(Pauli p);
  /// Conjugation by the Hadamard (swaps X and Z, negates Y).
  static Ptm hadamard();
  /// Unitary rotation exp(i theta Z).
  static Ptm rot_z(double theta);
  /// Unitary rotation exp(i theta n.sigma); axis is normalized internally.
  static Ptm rot_axis(const Vec3& axis, double theta);
  /// Stochastic Pauli channel with flip probabilities (px, py, pz).
  static Ptm pauli_channel(double px, double py, double pz);
};

struct PtmOptions {
  bool require_completeness = true;
  double completeness_tol = tol::completeness;
  double imag_tol = tol::imag_residue;
};

/// Builds the PTM entry (P, P') = sum_k w_k Tr[P E_k P' E_k^dag] / 2.
/// The imaginary part is checked against imag_tol and discarded.
/// Completeness may be waived for subnormalized conditional maps.
Ptm ptm_from_kraus(const KrausSet& k, const PtmOptions& opts = {});

/// Matrix product outer * inner; inner acts first.
Ptm compose(const Ptm& outer, const Ptm& inner);

/// Pauli twirl (1/4) sum_P P E P. Computed both as diagonal extraction and
/// as the explicit four-term conjugation average; the two routes must agree
/// to tol::twirl_agreement.
Ptm pauli_twirl(const Ptm& e);

/// Split of a PTM into the four components classified by their sign change
/// under conjugation with X^x Z^z. part(I) is the diagonal (the Pauli
/// twirl); part(X/Y/Z) hold the entries whose row and column labels differ
/// by that Pauli.
struct CoherenceParts {
  std::array<Mat4, 4> parts{Mat4::Zero(), Mat4::Zero(), Mat4::Zero(),
                            Mat4::Zero()};

  const Mat4& part(Pauli p) const { return parts[index(p)]; }
  Mat4& part(Pauli p) { return parts[index(p)]; }
  Mat4 sum() const { return parts[0] + parts[1] + parts[2] + parts[3]; }
};

CoherenceParts coherence_decompose(const Ptm& e);

/// r(E) = 1/2 - (E_XX + E_YY + E_ZZ) / 6.
double average_infidelity(const Ptm& e);

/// True iff every X-difference and Y-difference off-diagonal is below tol
/// in magnitude and the (Z, Z) entry equals 1 within tol.
bool is_pure_z_coherent(const Ptm& e, double tolerance = tol::purity);

/// True iff all off-diagonal entries are below tol in magnitude.
bool is_pauli(const Ptm& e, double tolerance = tol::eq);

/// True iff the first row equals (1, 0, 0, 0) within tol.
bool is_trace_preserving(const Ptm& e, double tolerance = tol::eq);

}  // namespace telenoise
