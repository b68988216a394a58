#include "telenoise/pauli_basis.hpp"

#include <cmath>

namespace telenoise {

namespace {

struct CzTable {
  std::array<int, 16> partner;  // joint code (ca + 4*cb) after conjugation
  std::array<double, 16> sign;
};

// Conjugation action of CZ on two-qubit Pauli strings, derived from the
// dense matrices once.
const CzTable& cz_table() {
  static const CzTable table = [] {
    CzTable t{};
    Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
    cz(3, 3) = -1.0;
    for (int ca = 0; ca < 4; ++ca) {
      for (int cb = 0; cb < 4; ++cb) {
        PauliString p = PauliString::single(2, 0, static_cast<Pauli>(ca)) *
                        PauliString::single(2, 1, static_cast<Pauli>(cb));
        const Eigen::Matrix4cd conj = cz * p.dense() * cz;
        bool found = false;
        for (int da = 0; da < 4 && !found; ++da) {
          for (int db = 0; db < 4 && !found; ++db) {
            PauliString q = PauliString::single(2, 0, static_cast<Pauli>(da)) *
                            PauliString::single(2, 1, static_cast<Pauli>(db));
            const Eigen::Matrix4cd qd = q.dense();
            for (double s : {1.0, -1.0}) {
              if ((conj - s * qd).cwiseAbs().maxCoeff() < 1e-9) {
                t.partner[static_cast<std::size_t>(ca + 4 * cb)] = da + 4 * db;
                t.sign[static_cast<std::size_t>(ca + 4 * cb)] = s;
                found = true;
                break;
              }
            }
          }
        }
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

ChannelTerms ChannelTerms::compile(const Mat4& ptm) {
  ChannelTerms out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (ptm(r, c) != 0.0) {
        out.terms[static_cast<std::size_t>(out.count++)] = {r, c, ptm(r, c)};
      }
    }
  }
  return out;
}

PauliOperatorBlock::PauliOperatorBlock(int qubits, int cols)
    : qubits_(qubits), cols_(cols) {
  if (qubits < 0 || qubits > 15) {
    throw ResourceLimitError("PauliOperatorBlock: qubit count out of range");
  }
  data_.assign(rows() * static_cast<std::size_t>(cols_), 0.0);
}

void PauliOperatorBlock::set_zero() {
  std::fill(data_.begin(), data_.end(), 0.0);
}

std::size_t PauliOperatorBlock::row_of(const PauliString& p) const {
  std::size_t row = 0;
  for (int q = 0; q < qubits_; ++q) {
    row |= static_cast<std::size_t>(index(p.pauli_at(q))) << (2 * q);
  }
  return row;
}

void PauliOperatorBlock::apply_channel(int qubit, const Mat4& ptm) {
  apply_channel(qubit, ChannelTerms::compile(ptm));
}

void PauliOperatorBlock::apply_channel(int qubit, const ChannelTerms& terms) {
  // slab of code c: contiguous run of 4^qubit rows (times cols doubles)
  const std::size_t slab = (std::size_t{1} << (2 * qubit)) *
                           static_cast<std::size_t>(cols_);
  const std::size_t total = data_.size();
  double scratch0[4];
  for (std::size_t base = 0; base < total; base += 4 * slab) {
    double* s[4] = {&data_[base], &data_[base + slab], &data_[base + 2 * slab],
                    &data_[base + 3 * slab]};
    for (std::size_t i = 0; i < slab; ++i) {
      scratch0[0] = scratch0[1] = scratch0[2] = scratch0[3] = 0.0;
      for (int t = 0; t < terms.count; ++t) {
        const ChannelTerms::Term& term = terms.terms[static_cast<std::size_t>(t)];
        scratch0[term.out] += term.coeff * s[term.in][i];
      }
      s[0][i] = scratch0[0];
      s[1][i] = scratch0[1];
      s[2][i] = scratch0[2];
      s[3][i] = scratch0[3];
    }
  }
}

void PauliOperatorBlock::apply_cz(int a, int b) {
  if (a == b) {
    throw DomainError("apply_cz: distinct qubits required");
  }
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  // joint code is (code_a + 4*code_b); build the lookup in (lo, hi) terms
  const CzTable& t = cz_table();
  const auto joint_of = [&](int clo, int chi) {
    return (lo == a) ? clo + 4 * chi : chi + 4 * clo;
  };

  const std::size_t c = static_cast<std::size_t>(cols_);
  const std::size_t slab_lo = (std::size_t{1} << (2 * lo)) * c;
  const std::size_t slab_hi = (std::size_t{1} << (2 * hi)) * c;
  const std::size_t total = data_.size();

  for (std::size_t bh = 0; bh < total; bh += 4 * slab_hi) {
    for (int chi = 0; chi < 4; ++chi) {
      const std::size_t hi_base = bh + static_cast<std::size_t>(chi) * slab_hi;
      for (std::size_t bl = 0; bl < slab_hi; bl += 4 * slab_lo) {
        for (int clo = 0; clo < 4; ++clo) {
          const int joint = joint_of(clo, chi);
          const int joint2 = t.partner[static_cast<std::size_t>(joint)];
          if (joint2 < joint) continue;
          const double s1 = t.sign[static_cast<std::size_t>(joint)];
          double* run1 = &data_[hi_base + bl +
                                static_cast<std::size_t>(clo) * slab_lo];
          if (joint2 == joint) {
            if (s1 != 1.0) {
              for (std::size_t i = 0; i < slab_lo; ++i) run1[i] = -run1[i];
            }
            continue;
          }
          const int dlo = (lo == a) ? joint2 % 4 : joint2 / 4;
          const int dhi = (lo == a) ? joint2 / 4 : joint2 % 4;
          const double s2 = t.sign[static_cast<std::size_t>(joint2)];
          double* run2 = &data_[bh + static_cast<std::size_t>(dhi) * slab_hi +
                                bl + static_cast<std::size_t>(dlo) * slab_lo];
          for (std::size_t i = 0; i < slab_lo; ++i) {
            const double v1 = run1[i], v2 = run2[i];
            run1[i] = s1 * v2;
            run2[i] = s2 * v1;
          }
        }
      }
    }
  }
}

void PauliOperatorBlock::apply_pauli_conj(int qubit, Pauli p) {
  if (p == Pauli::I) return;
  const std::size_t slab = (std::size_t{1} << (2 * qubit)) *
                           static_cast<std::size_t>(cols_);
  const std::size_t total = data_.size();
  for (std::size_t base = 0; base < total; base += 4 * slab) {
    for (int code = 1; code < 4; ++code) {
      if (code == index(p)) continue;
      double* run = &data_[base + static_cast<std::size_t>(code) * slab];
      for (std::size_t i = 0; i < slab; ++i) run[i] = -run[i];
    }
  }
}

void PauliOperatorBlock::reset_to_plus(int qubit) {
  const std::size_t slab = (std::size_t{1} << (2 * qubit)) *
                           static_cast<std::size_t>(cols_);
  const std::size_t total = data_.size();
  for (std::size_t base = 0; base < total; base += 4 * slab) {
    double* si = &data_[base];
    double* sx = &data_[base + slab];
    double* sy = &data_[base + 2 * slab];
    double* sz = &data_[base + 3 * slab];
    for (std::size_t i = 0; i < slab; ++i) {
      sx[i] = si[i];
      sy[i] = 0.0;
      sz[i] = 0.0;
    }
  }
}

void PauliOperatorBlock::project_x(int qubit, int outcome) {
  project_x_into(*this, *this, qubit, outcome);
}

void PauliOperatorBlock::teleport_into(const PauliOperatorBlock& src,
                                       PauliOperatorBlock& dst, int qubit,
                                       int m) {
  if (dst.qubits_ != src.qubits_ || dst.cols_ != src.cols_) {
    dst = PauliOperatorBlock(src.qubits_, src.cols_);
  }
  const std::size_t slab = (std::size_t{1} << (2 * qubit)) *
                           static_cast<std::size_t>(src.cols_);
  const std::size_t total = src.data_.size();
  const double zs = (m == 0) ? 0.5 : -0.5;  // sign picked up by X and Y
  for (std::size_t base = 0; base < total; base += 4 * slab) {
    const double* si = &src.data_[base];
    const double* sx = &src.data_[base + slab];
    const double* sy = &src.data_[base + 2 * slab];
    const double* sz = &src.data_[base + 3 * slab];
    double* di = &dst.data_[base];
    double* dx = &dst.data_[base + slab];
    double* dy = &dst.data_[base + 2 * slab];
    double* dz = &dst.data_[base + 3 * slab];
    for (std::size_t i = 0; i < slab; ++i) {
      // U = H Z^m: U^dag X U = Z, U^dag Z U = (-1)^m X, U^dag Y U = -(-1)^m Y
      const double vi = si[i], vx = sx[i], vy = sy[i], vz = sz[i];
      di[i] = 0.5 * vi;
      dx[i] = 0.5 * vz;
      dz[i] = zs * vx;
      dy[i] = -zs * vy;
    }
  }
}

void PauliOperatorBlock::project_x_into(const PauliOperatorBlock& src,
                                        PauliOperatorBlock& dst, int qubit,
                                        int outcome) {
  if (&dst != &src && (dst.qubits_ != src.qubits_ || dst.cols_ != src.cols_)) {
    dst = PauliOperatorBlock(src.qubits_, src.cols_);
  }
  const std::size_t slab = (std::size_t{1} << (2 * qubit)) *
                           static_cast<std::size_t>(src.cols_);
  const std::size_t total = src.data_.size();
  const double a = (outcome == 0) ? 1.0 : -1.0;
  for (std::size_t base = 0; base < total; base += 4 * slab) {
    const double* si = &src.data_[base];
    const double* sx = &src.data_[base + slab];
    double* di = &dst.data_[base];
    double* dx = &dst.data_[base + slab];
    double* dy = &dst.data_[base + 2 * slab];
    double* dz = &dst.data_[base + 3 * slab];
    for (std::size_t i = 0; i < slab; ++i) {
      const double vi = si[i], vx = sx[i];
      di[i] = 0.5 * (vi + a * vx);
      dx[i] = 0.5 * (vx + a * vi);
      dy[i] = 0.0;
      dz[i] = 0.0;
    }
  }
}

void PauliOperatorBlock::measure_reset_into(const PauliOperatorBlock& src,
                                            PauliOperatorBlock& dst, int qubit,
                                            int outcome) {
  if (&dst != &src && (dst.qubits_ != src.qubits_ || dst.cols_ != src.cols_)) {
    dst = PauliOperatorBlock(src.qubits_, src.cols_);
  }
  const std::size_t slab = (std::size_t{1} << (2 * qubit)) *
                           static_cast<std::size_t>(src.cols_);
  const std::size_t total = src.data_.size();
  const double a = (outcome == 0) ? 1.0 : -1.0;
  for (std::size_t base = 0; base < total; base += 4 * slab) {
    const double* si = &src.data_[base];
    const double* sx = &src.data_[base + slab];
    double* di = &dst.data_[base];
    double* dx = &dst.data_[base + slab];
    double* dy = &dst.data_[base + 2 * slab];
    double* dz = &dst.data_[base + 3 * slab];
    for (std::size_t i = 0; i < slab; ++i) {
      const double v = 0.5 * (si[i] + a * sx[i]);
      di[i] = v;
      dx[i] = v;  // fresh |+> on the measured qubit
      dy[i] = 0.0;
      dz[i] = 0.0;
    }
  }
}

Eigen::MatrixXcd PauliOperatorBlock::to_dense(int col) const {
  const int dim = 1 << qubits_;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  const double scale = 1.0 / static_cast<double>(dim);
  for (std::size_t r = 0; r < rows(); ++r) {
    if (coeff(r, col) == 0.0) continue;
    PauliString p = PauliString::identity(qubits_);
    for (int q = 0; q < qubits_; ++q) {
      const int code = static_cast<int>((r >> (2 * q)) & 3u);
      p = p * PauliString::single(qubits_, q, static_cast<Pauli>(code));
    }
    out += scale * coeff(r, col) * p.dense();
  }
  return out;
}

PauliOperatorBlock PauliOperatorBlock::from_dense(const Eigen::MatrixXcd& a) {
  int qubits = 0;
  while ((1 << qubits) < a.rows()) ++qubits;
  if ((1 << qubits) != a.rows() || a.rows() != a.cols()) {
    throw DimensionError("from_dense: matrix must be square with 2^q rows");
  }
  PauliOperatorBlock out(qubits, 1);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    PauliString p = PauliString::identity(qubits);
    for (int q = 0; q < qubits; ++q) {
      const int code = static_cast<int>((r >> (2 * q)) & 3u);
      p = p * PauliString::single(qubits, q, static_cast<Pauli>(code));
    }
    const std::complex<double> tr = (p.dense() * a).trace();
    if (std::abs(tr.imag()) > 1e-9) {
      throw NumericConsistencyError("from_dense: non-Hermitian input");
    }
    out.coeff(r, 0) = tr.real();
  }
  return out;
}

}  // namespace telenoise
