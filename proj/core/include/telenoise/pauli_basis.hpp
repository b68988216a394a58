#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "telenoise/pauli_string.hpp"
#include "telenoise/ptm.hpp"

namespace telenoise {

/// Sparse form of a single-qubit PTM, precompiled for the hot path.
struct ChannelTerms {
  struct Term {
    int out;
    int in;
    double coeff;
  };
  std::array<Term, 16> terms{};
  int count = 0;

  static ChannelTerms compile(const Mat4& ptm);
};

/// A batch of Hermitian operators on q qubits stored as real coefficients
/// in the tensor Pauli basis: entry (r, col) is Tr[P_r A_col], where the
/// Pauli codes of row r are packed two bits per qubit (qubit 0 least
/// significant, code order I, X, Y, Z). Every map used by the simulator
/// (single-qubit channels, CZ conjugation, X-basis projectors, resets)
/// is a structured pass over contiguous coefficient slabs.
class PauliOperatorBlock {
 public:
  PauliOperatorBlock() = default;
  PauliOperatorBlock(int qubits, int cols);

  int qubits() const { return qubits_; }
  int cols() const { return cols_; }
  std::size_t rows() const { return std::size_t{1} << (2 * qubits_); }

  double coeff(std::size_t row, int col) const {
    return data_[row * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(col)];
  }
  double& coeff(std::size_t row, int col) {
    return data_[row * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(col)];
  }
  void set_zero();

  std::size_t row_of(const PauliString& p) const;

  /// Applies a single-qubit channel (given by its PTM) along one qubit axis.
  void apply_channel(int qubit, const Mat4& ptm);
  void apply_channel(int qubit, const ChannelTerms& terms);

  /// Conjugation by CZ between two qubits.
  void apply_cz(int a, int b);

  /// Conjugation by a single-qubit Pauli (pure sign pass).
  void apply_pauli_conj(int qubit, Pauli p);

  /// Trace out a qubit and re-prepare it in |+><+|.
  void reset_to_plus(int qubit);

  /// Both-sided projector (I + (-1)^outcome X)/2 on one qubit.
  void project_x(int qubit, int outcome);

  /// dst = teleportation Kraus branch applied to src:
  /// rho -> (H Z^m) rho (H Z^m)^dag / 2.
  static void teleport_into(const PauliOperatorBlock& src,
                            PauliOperatorBlock& dst, int qubit, int m);

  /// dst = projected branch of src for the given X-measurement outcome.
  static void project_x_into(const PauliOperatorBlock& src,
                             PauliOperatorBlock& dst, int qubit, int outcome);

  /// dst = X measurement of one qubit followed by re-preparation in |+>,
  /// fused into a single pass.
  static void measure_reset_into(const PauliOperatorBlock& src,
                                 PauliOperatorBlock& dst, int qubit,
                                 int outcome);

  /// Dense matrix of one column (test support; exponential in qubits).
  Eigen::MatrixXcd to_dense(int col) const;
  static PauliOperatorBlock from_dense(const Eigen::MatrixXcd& a);

 private:
  int qubits_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace telenoise
