#pragma once

#include <vector>

#include "telenoise/chain.hpp"

namespace telenoise {

/// Worst coherence-to-incoherence ratio over the chain, with the location
/// where the maximum is attained.
struct EpsilonReport {
  double epsilon = 0.0;
  int t = 0;
  Pauli pauli = Pauli::I;
  Axis axis = Axis::X;
};

/// epsilon = max over t, P of |[E]_{P,XP} / [E]_{P,P}|,
/// |[E]_{ZP,XP} / [E]_{P,P}|, |[E]_{ZP,P} / [E]_{P,P}|.
EpsilonReport epsilon_of(const ChainSpec& spec);

/// Interval guaranteed to contain the relative change of a diagonal PTM
/// element of the chain's average channel across one (order 2) or two
/// (order 3) timesteps.
struct FactorInterval {
  Pauli pauli = Pauli::I;
  double lo = 0.0;
  double hi = 0.0;
  int order = 2;
  int t = 0;  // span end; the span is (t-1 -> t) or (t-2 -> t)
};

/// Per-step factor: (1 + d1) [Et^H]_{P,P} + (1 + d2) times the coherence
/// cross term of neighbouring steps, ranged over d1, d2. Requires t > 2 and
/// epsilon < 1/3.
FactorInterval second_order_factor(const ChainSpec& spec, int t, Pauli p);

/// Two-step factor built from the r~, gamma~, delta~ combinations with
/// eta3 in +-5 eps^2 and eta5 in +-18 eps^4. Requires t >= 4 and
/// epsilon < 1/3.
FactorInterval third_order_factor(const ChainSpec& spec, int t, Pauli p);

/// Per-t infidelity bounds from cumulative products of factor intervals,
/// seeded with the exact channel at the timesteps the factors do not cover
/// (t <= 2 for order 2, t <= 3 for order 3).
struct InfidelityBand {
  std::vector<double> r_lo;  // index 0 is t = 1
  std::vector<double> r_hi;
};

InfidelityBand infidelity_band(const ChainSpec& spec, int t_max, int order);

/// Worst-case linear growth (17/2) r0 t; requires r0 <= 1/100.
double corollary_linear_bound(double r0, int t);

/// Axis-scaled rotation angles of per-step unitary errors exp(i theta.sigma).
struct RotationSchedule {
  std::vector<Vec3> theta;
};

struct SimpleEstimate {
  std::vector<double> r;  // index 0 is t = 1
  /// Set when max|theta| times the length exceeds 0.3, outside the
  /// small-angle regime the estimate assumes.
  bool small_angle_warning = false;
};

/// Small-angle infidelity estimate (2/3) sum |theta_s|^2 plus the exact
/// adjacent-step correlation term, with expectations evaluated by frame
/// enumeration.
SimpleEstimate simple_proof_estimate(const RotationSchedule& sched);

}  // namespace telenoise
