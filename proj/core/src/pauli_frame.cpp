#include "telenoise/pauli_frame.hpp"

namespace telenoise {

PauliFrame PauliFrame::from_index(int idx) {
  if (idx < 0 || idx > 7) {
    throw DomainError("PauliFrame::from_index: index must be in [0, 7]");
  }
  return PauliFrame{idx >= 4, static_cast<Pauli>(idx % 4)};
}

Pauli PauliFrame::pauli_from_bits(bool x, bool z) {
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

PauliFrame PauliFrame::updated(int m) const {
  return PauliFrame{true, pauli_from_bits(false, m != 0)}.composed(*this);
}

PauliFrame PauliFrame::composed(const PauliFrame& inner) const {
  // H^h2 X^x2 Z^z2 . H^h1 X^x1 Z^z1; pushing H^h1 left through X^x2 Z^z2
  // swaps (x2, z2).
  bool x2 = x_bit(), z2 = z_bit();
  if (inner.hadamard) std::swap(x2, z2);
  return PauliFrame{hadamard != inner.hadamard,
                    pauli_from_bits(x2 != inner.x_bit(), z2 != inner.z_bit())};
}

PauliFrame PauliFrame::inverse() const {
  if (!hadamard) return *this;  // Paulis are self-inverse as channels
  return PauliFrame{true, pauli_from_bits(z_bit(), x_bit())};
}

std::array<PauliFrame, 2> PauliFrame::predecessors() const {
  std::array<PauliFrame, 2> out;
  for (int m = 0; m < 2; ++m) {
    const PauliFrame step{true, pauli_from_bits(false, m != 0)};
    out[m] = step.inverse().composed(*this);
  }
  return out;
}

Ptm PauliFrame::ptm() const {
  Ptm p = Ptm::pauli_unitary(pauli);
  if (hadamard) p = compose(Ptm::hadamard(), p);
  return p;
}

PauliFrame frame_after(const std::vector<int>& outcomes) {
  bool x = false, z = false;
  for (std::size_t s = 1; s <= outcomes.size(); ++s) {
    const bool bit = outcomes[s - 1] != 0;
    if (s % 2 == 0) {
      x = x != bit;
    } else {
      z = z != bit;
    }
  }
  return PauliFrame{outcomes.size() % 2 == 1, PauliFrame::pauli_from_bits(x, z)};
}

FrameMarginal frame_marginal(int t) {
  if (t < 1) {
    throw DomainError("frame_marginal: timestep must be >= 1");
  }
  FrameMarginal out;
  if (t == 1) {
    out.support = {PauliFrame{true, Pauli::I}, PauliFrame{true, Pauli::Z}};
    out.probability = 0.5;
  } else if (t % 2 == 0) {
    for (Pauli p : kPaulis) out.support.push_back(PauliFrame{false, p});
    out.probability = 0.25;
  } else {
    for (Pauli p : kPaulis) out.support.push_back(PauliFrame{true, p});
    out.probability = 0.25;
  }
  return out;
}

Ptm conjugate(const Ptm& e, const PauliFrame& f) {
  const Mat4 fm = f.ptm().m;
  return Ptm{f.inverse().ptm().m * e.m * fm};
}

}  // namespace telenoise
