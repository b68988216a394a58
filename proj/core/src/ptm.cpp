#include "telenoise/ptm.hpp"

#include <cmath>
#include <sstream>

namespace telenoise {

namespace {

using Complex = std::complex<double>;

const Mat2c& pauli_matrix_ref(int p) {
  static const std::array<Mat2c, 4> mats = [] {
    std::array<Mat2c, 4> m;
    const Complex i(0.0, 1.0);
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -i, i, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return mats[p];
}

}  // namespace

const char* to_string(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
  }
  return "?";
}

const char* to_string(Axis a) {
  switch (a) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
  }
  return "?";
}

Pauli pauli_product(Pauli a, Pauli b) {
  if (a == Pauli::I) return b;
  if (b == Pauli::I) return a;
  if (a == b) return Pauli::I;
  // the remaining Pauli: XOR of the indices works on {1,2,3}
  return static_cast<Pauli>(index(a) ^ index(b));
}

Mat2c pauli_matrix(Pauli p) { return pauli_matrix_ref(index(p)); }

double completeness_defect(const KrausSet& k) {
  Mat2c acc = Mat2c::Zero();
  for (std::size_t i = 0; i < k.ops.size(); ++i) {
    acc += k.weight(i) * (k.ops[i].adjoint() * k.ops[i]);
  }
  return (acc - Mat2c::Identity()).cwiseAbs().maxCoeff();
}

Ptm ptm_from_kraus(const KrausSet& k, const PtmOptions& opts) {
  if (k.ops.empty()) {
    throw DimensionError("ptm_from_kraus: empty Kraus set");
  }
  for (const auto& op : k.ops) {
    if (op.rows() != 2 || op.cols() != 2) {
      throw DimensionError("ptm_from_kraus: Kraus operators must be 2x2");
    }
  }
  if (!k.weights.empty() && k.weights.size() != k.ops.size()) {
    throw DimensionError("ptm_from_kraus: weights/ops size mismatch");
  }
  if (opts.require_completeness) {
    const double defect = completeness_defect(k);
    if (defect > opts.completeness_tol) {
      std::ostringstream msg;
      msg << "ptm_from_kraus: Kraus completeness defect " << defect
          << " exceeds tolerance " << opts.completeness_tol;
      throw NumericConsistencyError(msg.str());
    }
  }

  Ptm result;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      Complex entry(0.0, 0.0);
      for (std::size_t i = 0; i < k.ops.size(); ++i) {
        const Mat2c& e = k.ops[i];
        entry += k.weight(i) *
                 (pauli_matrix_ref(r).adjoint() * e * pauli_matrix_ref(c) *
                  e.adjoint())
                     .trace();
      }
      entry *= 0.5;
      if (std::abs(entry.imag()) > opts.imag_tol) {
        std::ostringstream msg;
        msg << "ptm_from_kraus: imaginary residue " << entry.imag()
            << " at entry (" << to_string(static_cast<Pauli>(r)) << ", "
            << to_string(static_cast<Pauli>(c)) << ")";
        throw NumericConsistencyError(msg.str());
      }
      result.m(r, c) = entry.real();
    }
  }
  return result;
}

Ptm Ptm::pauli_unitary(Pauli p) {
  Ptm out;
  if (p == Pauli::I) return out;
  for (int q = 1; q < 4; ++q) {
    // a Pauli conjugation fixes I and itself, negates the other two
    out.m(q, q) = (q == index(p)) ? 1.0 : -1.0;
  }
  return out;
}

Ptm Ptm::hadamard() {
  Ptm out;
  out.m.setZero();
  out.m(0, 0) = 1.0;
  out.m(index(Pauli::X), index(Pauli::Z)) = 1.0;
  out.m(index(Pauli::Z), index(Pauli::X)) = 1.0;
  out.m(index(Pauli::Y), index(Pauli::Y)) = -1.0;
  return out;
}

Ptm Ptm::rot_z(double theta) {
  const Complex i(0.0, 1.0);
  KrausSet k;
  k.ops.push_back(std::cos(theta) * Mat2c::Identity() +
                  i * std::sin(theta) * pauli_matrix_ref(3));
  return ptm_from_kraus(k);
}

Ptm Ptm::rot_axis(const Vec3& axis, double theta) {
  const double norm = axis.norm();
  if (norm == 0.0) {
    throw DomainError("rot_axis: zero axis");
  }
  const Vec3 n = axis / norm;
  const Complex i(0.0, 1.0);
  Mat2c n_dot_sigma = n.x() * pauli_matrix_ref(1) + n.y() * pauli_matrix_ref(2) +
                      n.z() * pauli_matrix_ref(3);
  KrausSet k;
  k.ops.push_back(std::cos(theta) * Mat2c::Identity() +
                  i * std::sin(theta) * n_dot_sigma);
  return ptm_from_kraus(k);
}

Ptm Ptm::pauli_channel(double px, double py, double pz) {
  const double pi = 1.0 - px - py - pz;
  if (px < 0 || py < 0 || pz < 0 || pi < -tol::eq) {
    throw DomainError("pauli_channel: probabilities must be in [0,1] and sum to at most 1");
  }
  KrausSet k;
  const double probs[4] = {std::max(pi, 0.0), px, py, pz};
  for (int p = 0; p < 4; ++p) {
    k.ops.push_back(std::sqrt(probs[p]) * pauli_matrix_ref(p));
  }
  return ptm_from_kraus(k);
}

Ptm compose(const Ptm& outer, const Ptm& inner) {
  return Ptm{outer.m * inner.m};
}

Ptm pauli_twirl(const Ptm& e) {
  Ptm diag;
  diag.m = e.m.diagonal().asDiagonal();

  Mat4 conjugated = Mat4::Zero();
  for (Pauli p : kPaulis) {
    const Mat4 pm = Ptm::pauli_unitary(p).m;
    conjugated += pm * e.m * pm;
  }
  conjugated *= 0.25;

  const double disagreement = (conjugated - diag.m).cwiseAbs().maxCoeff();
  if (disagreement > tol::twirl_agreement) {
    std::ostringstream msg;
    msg << "pauli_twirl: diagonal extraction and explicit conjugation "
           "disagree by "
        << disagreement;
    throw NumericConsistencyError(msg.str());
  }
  return diag;
}

CoherenceParts coherence_decompose(const Ptm& e) {
  CoherenceParts out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const Pauli diff =
          pauli_product(static_cast<Pauli>(r), static_cast<Pauli>(c));
      out.part(diff)(r, c) = e.m(r, c);
    }
  }
  return out;
}

double average_infidelity(const Ptm& e) {
  return 0.5 - (e.m(1, 1) + e.m(2, 2) + e.m(3, 3)) / 6.0;
}

bool is_pure_z_coherent(const Ptm& e, double tolerance) {
  const CoherenceParts parts = coherence_decompose(e);
  const double xy_coherence =
      std::max(parts.part(Pauli::X).cwiseAbs().maxCoeff(),
               parts.part(Pauli::Y).cwiseAbs().maxCoeff());
  return xy_coherence < tolerance &&
         std::abs(e.m(3, 3) - 1.0) < tolerance;
}

bool is_pauli(const Ptm& e, double tolerance) {
  Mat4 off = e.m;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() < tolerance;
}

bool is_trace_preserving(const Ptm& e, double tolerance) {
  return std::abs(e.m(0, 0) - 1.0) < tolerance &&
         std::abs(e.m(0, 1)) < tolerance && std::abs(e.m(0, 2)) < tolerance &&
         std::abs(e.m(0, 3)) < tolerance;
}

}  // namespace telenoise
