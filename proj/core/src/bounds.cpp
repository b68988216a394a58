#include "telenoise/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace telenoise {

namespace {

// E_t dressed with the Hadamard of odd timesteps.
Ptm dressed(const ChainSpec& spec, int t) {
  const Ptm& e = spec.error_at(t);
  if (t % 2 == 1) {
    return conjugate(e, PauliFrame{true, Pauli::I});
  }
  return e;
}

void require_epsilon(const EpsilonReport& rep) {
  if (rep.epsilon >= 1.0 / 3.0) {
    std::ostringstream msg;
    msg << "coherence ratio epsilon = " << rep.epsilon
        << " violates the < 1/3 smallness condition (worst at t = " << rep.t
        << ", P = " << to_string(rep.pauli) << ", axis " << to_string(rep.axis)
        << ")";
    throw PreconditionError(msg.str());
  }
}

struct Interval {
  double lo, hi;
};

Interval seed_interval(double v) { return {v, v}; }

Interval interval_product(const Interval& a, const Interval& b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Interval out{std::min({c[0], c[1], c[2], c[3]}),
               std::max({c[0], c[1], c[2], c[3]})};
  if (out.lo < 0.0) out.lo = 0.0;  // conservative widening, factors positive in regime
  return out;
}

}  // namespace

EpsilonReport epsilon_of(const ChainSpec& spec) {
  EpsilonReport rep;
  for (int t = 1; t <= spec.length(); ++t) {
    const Ptm& e = spec.error_at(t);
    for (Pauli p : kPaulis) {
      const double diag = e(p, p);
      if (diag == 0.0) {
        std::ostringstream msg;
        msg << "epsilon_of: zero diagonal PTM entry at t = " << t
            << ", P = " << to_string(p);
        throw SingularityError(msg.str());
      }
      const Pauli xp = pauli_product(Pauli::X, p);
      const Pauli zp = pauli_product(Pauli::Z, p);
      const struct {
        double value;
        Axis axis;
      } ratios[3] = {
          {e(p, xp) / diag, Axis::X},
          {e(zp, xp) / diag, Axis::Y},
          {e(zp, p) / diag, Axis::Z},
      };
      for (const auto& r : ratios) {
        if (std::abs(r.value) > rep.epsilon) {
          rep.epsilon = std::abs(r.value);
          rep.t = t;
          rep.pauli = p;
          rep.axis = r.axis;
        }
      }
    }
  }
  return rep;
}

FactorInterval second_order_factor(const ChainSpec& spec, int t, Pauli p) {
  if (t <= 2) {
    throw DomainError("second_order_factor: requires t > 2");
  }
  if (t > spec.length()) {
    throw DomainError("second_order_factor: t beyond chain length");
  }
  const EpsilonReport rep = epsilon_of(spec);
  require_epsilon(rep);
  const double eps = rep.epsilon;

  const Ptm et = dressed(spec, t);
  const Ptm ep = dressed(spec, t - 1);
  // X-difference entries couple at even t, Z-difference at odd t.
  const Pauli q = (t % 2 == 0) ? pauli_product(Pauli::X, p)
                               : pauli_product(Pauli::Z, p);
  const double base = et(p, p);
  const double cross = et(p, q) * ep(q, p) / ep(p, p);

  const double e2 = eps * eps;
  const double d1_mag = 3.0 * eps * e2 / (1.0 - 3.0 * e2);
  const double d2_lo = -3.0 * e2 / (1.0 + 3.0 * e2);
  const double d2_hi = 3.0 * e2 / (1.0 - 3.0 * e2);

  FactorInterval out{p, 0.0, 0.0, 2, t};
  out.lo = out.hi = (1.0 + d1_mag) * base + (1.0 + d2_lo) * cross;
  for (double d1 : {-d1_mag, d1_mag}) {
    for (double d2 : {d2_lo, d2_hi}) {
      const double v = (1.0 + d1) * base + (1.0 + d2) * cross;
      out.lo = std::min(out.lo, v);
      out.hi = std::max(out.hi, v);
    }
  }
  return out;
}

FactorInterval third_order_factor(const ChainSpec& spec, int t, Pauli p) {
  if (t < 4) {
    throw DomainError("third_order_factor: requires t >= 4");
  }
  if (t > spec.length()) {
    throw DomainError("third_order_factor: t beyond chain length");
  }
  const EpsilonReport rep = epsilon_of(spec);
  require_epsilon(rep);
  const double eps = rep.epsilon;

  // Subscript rule: q1 = XP, q2 = ZP at even t; exchanged at odd t. The
  // two-step span keeps the same parity at t and t-2.
  const Pauli xp = pauli_product(Pauli::X, p);
  const Pauli zp = pauli_product(Pauli::Z, p);
  const Pauli q1 = (t % 2 == 0) ? xp : zp;
  const Pauli q2 = (t % 2 == 0) ? zp : xp;

  const auto r_tilde = [&](int s) {
    const Ptm a = dressed(spec, s), b = dressed(spec, s - 1);
    return a(p, p) * b(p, p) + a(p, q1) * b(q1, p);
  };
  const auto gamma_tilde = [&](int s) {
    const Ptm a = dressed(spec, s), b = dressed(spec, s - 1);
    return a(p, p) * b(p, q2) + a(p, q1) * b(q1, q2);
  };
  const auto delta_tilde = [&](int s) {
    const Ptm a = dressed(spec, s), b = dressed(spec, s - 1);
    return a(q2, p) * b(p, p) + a(q2, q1) * b(q1, p);
  };

  const double rt = r_tilde(t);
  const double cross = gamma_tilde(t) * delta_tilde(t - 2) /
                       (dressed(spec, t - 2)(p, p) * dressed(spec, t - 3)(p, p));
  const double tail = dressed(spec, t)(p, p) * dressed(spec, t - 2)(p, p);

  const double e2 = eps * eps;
  const double eta3_mag = 5.0 * e2;
  const double eta5_mag = 18.0 * e2 * e2;

  FactorInterval out{p, 0.0, 0.0, 3, t};
  bool first = true;
  for (double eta3 : {-eta3_mag, eta3_mag}) {
    for (double eta5 : {-eta5_mag, eta5_mag}) {
      const double v = rt + cross / (1.0 + eta3) + eta5 * tail;
      if (first) {
        out.lo = out.hi = v;
        first = false;
      } else {
        out.lo = std::min(out.lo, v);
        out.hi = std::max(out.hi, v);
      }
    }
  }
  return out;
}

InfidelityBand infidelity_band(const ChainSpec& spec, int t_max, int order) {
  if (order != 2 && order != 3) {
    throw DomainError("infidelity_band: order must be 2 or 3");
  }
  if (t_max < 1 || t_max > spec.length()) {
    throw DomainError("infidelity_band: t_max outside chain range");
  }
  const int seeded = (order == 2) ? 2 : 3;

  const std::vector<Ptm> exact = exact_average_series(spec);

  // per-axis diagonal intervals, index 0 <-> t = 1
  std::array<std::vector<Interval>, 3> diag;  // X, Y, Z
  for (auto& v : diag) v.resize(static_cast<std::size_t>(t_max));

  for (int t = 1; t <= t_max; ++t) {
    for (int a = 0; a < 3; ++a) {
      const Pauli p = static_cast<Pauli>(a + 1);
      auto& slot = diag[static_cast<std::size_t>(a)][static_cast<std::size_t>(t - 1)];
      if (t <= seeded) {
        slot = seed_interval(exact[static_cast<std::size_t>(t - 1)](p, p));
        continue;
      }
      if (order == 2) {
        const FactorInterval f = second_order_factor(spec, t, p);
        slot = interval_product(
            diag[static_cast<std::size_t>(a)][static_cast<std::size_t>(t - 2)],
            Interval{f.lo, f.hi});
      } else {
        const FactorInterval f = third_order_factor(spec, t, p);
        slot = interval_product(
            diag[static_cast<std::size_t>(a)][static_cast<std::size_t>(t - 3)],
            Interval{f.lo, f.hi});
      }
    }
  }

  InfidelityBand band;
  band.r_lo.resize(static_cast<std::size_t>(t_max));
  band.r_hi.resize(static_cast<std::size_t>(t_max));
  for (int t = 1; t <= t_max; ++t) {
    double sum_lo = 0.0, sum_hi = 0.0;
    for (int a = 0; a < 3; ++a) {
      sum_lo += diag[static_cast<std::size_t>(a)][static_cast<std::size_t>(t - 1)].lo;
      sum_hi += diag[static_cast<std::size_t>(a)][static_cast<std::size_t>(t - 1)].hi;
    }
    band.r_lo[static_cast<std::size_t>(t - 1)] = 0.5 - sum_hi / 6.0;
    band.r_hi[static_cast<std::size_t>(t - 1)] = 0.5 - sum_lo / 6.0;
  }
  return band;
}

double corollary_linear_bound(double r0, int t) {
  if (r0 < 0.0 || r0 > 0.01) {
    throw PreconditionError(
        "corollary_linear_bound: requires 0 <= r0 <= 1/100");
  }
  if (t < 0) {
    throw DomainError("corollary_linear_bound: negative timestep");
  }
  return 8.5 * r0 * static_cast<double>(t);
}

SimpleEstimate simple_proof_estimate(const RotationSchedule& sched) {
  SimpleEstimate out;
  const int t_max = static_cast<int>(sched.theta.size());
  out.r.resize(static_cast<std::size_t>(t_max), 0.0);
  if (t_max == 0) return out;

  double max_norm = 0.0;
  for (const Vec3& th : sched.theta) max_norm = std::max(max_norm, th.norm());
  out.small_angle_warning = max_norm * static_cast<double>(t_max) > 0.3;

  // 3x3 rotation block of the inverse-frame conjugation at each frame
  const auto rotation = [](const PauliFrame& f) {
    return Eigen::Matrix3d(f.inverse().ptm().m.block<3, 3>(1, 1));
  };

  // E[theta'_s . theta'_{s+1}] over the joint distribution (frame at s,
  // outcome m at s+1); both successors of a frame are equally likely.
  const auto adjacent = [&](int s) {
    const FrameMarginal marginal = frame_marginal(s);
    const Vec3& a = sched.theta[static_cast<std::size_t>(s - 1)];
    const Vec3& b = sched.theta[static_cast<std::size_t>(s)];
    double acc = 0.0;
    for (const PauliFrame& f : marginal.support) {
      const Vec3 ta = rotation(f) * a;
      for (int m = 0; m < 2; ++m) {
        const Vec3 tb = rotation(f.updated(m)) * b;
        acc += marginal.probability * 0.5 * ta.dot(tb);
      }
    }
    return acc;
  };

  double sum_sq = 0.0;
  double sum_adj = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    sum_sq += sched.theta[static_cast<std::size_t>(t - 1)].squaredNorm();
    if (t >= 2) sum_adj += adjacent(t - 1);
    out.r[static_cast<std::size_t>(t - 1)] =
        (2.0 / 3.0) * sum_sq + (4.0 / 3.0) * sum_adj;
  }
  return out;
}

}  // namespace telenoise
