#pragma once

#include <array>
#include <vector>

#include "telenoise/ptm.hpp"

namespace telenoise {

/// One of the eight byproduct channels of a teleportation chain, in the
/// canonical operator form H^h X^x Z^z (phases dropped at the channel
/// level). The Pauli field stores X^x Z^z as I/X/Y/Z.
struct PauliFrame {
  bool hadamard = false;
  Pauli pauli = Pauli::I;

  static PauliFrame identity() { return {}; }
  static PauliFrame from_index(int idx);
  int index() const { return telenoise::index(pauli) + (hadamard ? 4 : 0); }

  bool x_bit() const { return pauli == Pauli::X || pauli == Pauli::Y; }
  bool z_bit() const { return pauli == Pauli::Z || pauli == Pauli::Y; }
  static Pauli pauli_from_bits(bool x, bool z);

  /// Frame after one more teleportation with outcome m: (H Z^m) o this.
  PauliFrame updated(int m) const;

  /// Operator product this o inner (inner acts first).
  PauliFrame composed(const PauliFrame& inner) const;

  PauliFrame inverse() const;

  /// The two frames g with this == (H Z^m) o g, for m = 0 and 1.
  std::array<PauliFrame, 2> predecessors() const;

  /// 4x4 channel representation (a signed axis permutation).
  Ptm ptm() const;

  bool operator==(const PauliFrame&) const = default;
};

/// Closed form of the frame after the given outcome bits (outcomes[s-1] is
/// the measurement at step s): X power is the parity of even-step outcomes,
/// Z power the parity of odd-step outcomes, H present iff the length is odd.
PauliFrame frame_after(const std::vector<int>& outcomes);

/// Uniform marginal distribution of the frame at timestep t:
/// {H, HZ} at t = 1, {I, X, Y, Z} at even t, {H, HX, HY, HZ} at odd t > 1.
struct FrameMarginal {
  std::vector<PauliFrame> support;
  double probability = 0.0;  // shared by every supported frame
};

FrameMarginal frame_marginal(int t);

/// Interaction-picture transform f^{-1} o e o f.
Ptm conjugate(const Ptm& e, const PauliFrame& f);

}  // namespace telenoise
