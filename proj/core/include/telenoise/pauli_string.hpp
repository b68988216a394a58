#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "telenoise/css_code.hpp"
#include "telenoise/ptm.hpp"

namespace telenoise {

/// n-qubit Pauli operator i^phase_pow * (tensor product of canonical
/// single-qubit Paulis), with the per-qubit factor determined by the x/z
/// support bits: (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.
struct PauliString {
  int n = 0;
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  int phase_pow = 0;  // power of i, mod 4

  static PauliString identity(int n);
  static PauliString single(int n, int qubit, Pauli p);
  static PauliString from_support(int n, const std::vector<std::uint8_t>& xs,
                                  const std::vector<std::uint8_t>& zs);

  Pauli pauli_at(int qubit) const;
  bool commutes_with(const PauliString& other) const;
  bool is_hermitian() const { return phase_pow % 2 == 0; }
  /// +1 or -1 for Hermitian strings.
  double sign() const;

  /// Operator product this * other (phases tracked mod 4).
  PauliString operator*(const PauliString& other) const;

  Eigen::MatrixXcd dense() const;
};

/// All 2^(num checks) products of the code's check generators (X rows as
/// X-type strings, Z rows as Z-type strings).
std::vector<PauliString> stabilizer_group(const CssCode& code);

/// Logical X / Z / Y strings of logical qubit l; Y is i * X * Z.
PauliString logical_string(const CssCode& code, int l, Pauli p);

}  // namespace telenoise
