#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telenoise/errors.hpp"

namespace telenoise {

using BinaryRow = std::vector<std::uint8_t>;
using BinaryMatrix = std::vector<BinaryRow>;

/// Parity of the overlap of two binary supports.
int mod2_dot(const BinaryRow& a, const BinaryRow& b);

/// CSS code given by X- and Z-type parity checks plus one logical X/Z pair
/// per encoded qubit.
struct CssCode {
  int n = 0;
  int k = 0;
  BinaryMatrix x_checks;   // rows of length n
  BinaryMatrix z_checks;   // rows of length n
  BinaryMatrix logical_x;  // k rows of length n
  BinaryMatrix logical_z;  // k rows of length n

  int num_x_checks() const { return static_cast<int>(x_checks.size()); }
  int num_z_checks() const { return static_cast<int>(z_checks.size()); }

  /// [[4,1,2]] code: X check XXXX, Z checks Z1Z2 and Z3Z4.
  static CssCode four_one_two();
  /// Length-n repetition code: Z checks between neighbours, no X checks.
  static CssCode repetition(int n);
};

/// Report-style well-formedness check: CSS orthogonality of the checks plus
/// the commutation/anticommutation pattern of the logical operators.
/// Returns one human-readable line per violation; empty means ok.
std::vector<std::string> validate_code(const CssCode& code);

}  // namespace telenoise
