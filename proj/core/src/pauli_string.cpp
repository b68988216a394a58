#include "telenoise/pauli_string.hpp"

#include <bit>

namespace telenoise {

namespace {

// phase_table[a][b] = power of i in canonical(a) * canonical(b)
// = i^phi canonical(a XOR b), computed once from the dense matrices.
const std::array<std::array<int, 4>, 4>& phase_table() {
  static const std::array<std::array<int, 4>, 4> table = [] {
    std::array<std::array<int, 4>, 4> t{};
    const std::complex<double> i(0.0, 1.0);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const Mat2c prod =
            pauli_matrix(static_cast<Pauli>(a)) * pauli_matrix(static_cast<Pauli>(b));
        const Mat2c target = pauli_matrix(pauli_product(
            static_cast<Pauli>(a), static_cast<Pauli>(b)));
        for (int p = 0; p < 4; ++p) {
          if ((prod - std::pow(i, p) * target).cwiseAbs().maxCoeff() < 1e-9) {
            t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = p;
            break;
          }
        }
      }
    }
    return t;
  }();
  return table;
}

int code_of(bool xbit, bool zbit) {
  if (xbit && zbit) return 2;  // Y
  if (xbit) return 1;          // X
  if (zbit) return 3;          // Z
  return 0;                    // I
}

}  // namespace

PauliString PauliString::identity(int n) { return PauliString{n, 0, 0, 0}; }

PauliString PauliString::single(int n, int qubit, Pauli p) {
  if (qubit < 0 || qubit >= n) {
    throw DomainError("PauliString::single: qubit out of range");
  }
  PauliString s = identity(n);
  const std::uint32_t bit = 1u << qubit;
  if (p == Pauli::X || p == Pauli::Y) s.x |= bit;
  if (p == Pauli::Z || p == Pauli::Y) s.z |= bit;
  return s;
}

PauliString PauliString::from_support(int n,
                                      const std::vector<std::uint8_t>& xs,
                                      const std::vector<std::uint8_t>& zs) {
  PauliString s = identity(n);
  for (int q = 0; q < n; ++q) {
    if (q < static_cast<int>(xs.size()) && xs[static_cast<std::size_t>(q)]) {
      s.x |= 1u << q;
    }
    if (q < static_cast<int>(zs.size()) && zs[static_cast<std::size_t>(q)]) {
      s.z |= 1u << q;
    }
  }
  return s;
}

Pauli PauliString::pauli_at(int qubit) const {
  const bool xb = (x >> qubit) & 1u;
  const bool zb = (z >> qubit) & 1u;
  return static_cast<Pauli>(code_of(xb, zb));
}

bool PauliString::commutes_with(const PauliString& other) const {
  const int anti = std::popcount(x & other.z) + std::popcount(z & other.x);
  return anti % 2 == 0;
}

double PauliString::sign() const {
  switch ((phase_pow % 4 + 4) % 4) {
    case 0: return 1.0;
    case 2: return -1.0;
    default:
      throw NumericConsistencyError("PauliString::sign: non-Hermitian phase");
  }
}

PauliString PauliString::operator*(const PauliString& other) const {
  if (n != other.n) {
    throw DimensionError("PauliString: qubit count mismatch");
  }
  PauliString out{n, x ^ other.x, z ^ other.z,
                  (phase_pow + other.phase_pow) % 4};
  for (int q = 0; q < n; ++q) {
    const int a = code_of((x >> q) & 1u, (z >> q) & 1u);
    const int b = code_of((other.x >> q) & 1u, (other.z >> q) & 1u);
    out.phase_pow = (out.phase_pow +
                     phase_table()[static_cast<std::size_t>(a)]
                                  [static_cast<std::size_t>(b)]) %
                    4;
  }
  return out;
}

Eigen::MatrixXcd PauliString::dense() const {
  const std::complex<double> i(0.0, 1.0);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  // qubit 0 is the least significant bit of the basis index
  for (int q = 0; q < n; ++q) {
    const Mat2c factor = pauli_matrix(pauli_at(q));
    Eigen::MatrixXcd next(acc.rows() * 2, acc.cols() * 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        next.block(r * acc.rows(), c * acc.cols(), acc.rows(), acc.cols()) =
            factor(r, c) * acc;
      }
    }
    acc = std::move(next);
  }
  return std::pow(i, (phase_pow % 4 + 4) % 4) * acc;
}

std::vector<PauliString> stabilizer_group(const CssCode& code) {
  std::vector<PauliString> generators;
  for (const auto& row : code.x_checks) {
    generators.push_back(PauliString::from_support(code.n, row, {}));
  }
  for (const auto& row : code.z_checks) {
    generators.push_back(PauliString::from_support(code.n, {}, row));
  }
  std::vector<PauliString> group{PauliString::identity(code.n)};
  for (const PauliString& g : generators) {
    const std::size_t count = group.size();
    for (std::size_t i = 0; i < count; ++i) {
      group.push_back(group[i] * g);
    }
  }
  return group;
}

PauliString logical_string(const CssCode& code, int l, Pauli p) {
  if (l < 0 || l >= code.k) {
    throw DomainError("logical_string: logical index out of range");
  }
  const auto& lx = code.logical_x[static_cast<std::size_t>(l)];
  const auto& lz = code.logical_z[static_cast<std::size_t>(l)];
  switch (p) {
    case Pauli::I:
      return PauliString::identity(code.n);
    case Pauli::X:
      return PauliString::from_support(code.n, lx, {});
    case Pauli::Z:
      return PauliString::from_support(code.n, {}, lz);
    case Pauli::Y: {
      PauliString y = PauliString::from_support(code.n, lx, {}) *
                      PauliString::from_support(code.n, {}, lz);
      y.phase_pow = (y.phase_pow + 1) % 4;  // Y = i X Z
      return y;
    }
  }
  throw DomainError("logical_string: bad Pauli");
}

}  // namespace telenoise
