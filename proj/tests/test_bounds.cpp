#include <doctest.h>

#include <cmath>
#include <random>

#include "telenoise/bounds.hpp"
#include "test_support.hpp"

using namespace telenoise;
using telenoise::testing::max_abs_diff;
using telenoise::testing::mix_with_identity;
using telenoise::testing::random_channel;

TEST_CASE("epsilon_of: Pauli channels have zero coherence ratio") {
  const ChainSpec spec =
      ChainSpec::repeated(Ptm::pauli_channel(0.02, 0.03, 0.05), 5);
  CHECK(epsilon_of(spec).epsilon == 0.0);
}

TEST_CASE("epsilon_of: Z rotation gives tan(2 theta)") {
  const double theta = 0.1;
  const ChainSpec spec = ChainSpec::repeated(Ptm::rot_z(theta), 3);
  const EpsilonReport rep = epsilon_of(spec);
  CHECK(rep.epsilon == doctest::Approx(std::tan(2.0 * theta)).epsilon(1e-12));
}

TEST_CASE("epsilon_of: zero diagonal raises a singularity error") {
  Mat4 dep = Mat4::Zero();
  dep(0, 0) = 1.0;
  const ChainSpec spec = ChainSpec::repeated(Ptm{dep}, 2);
  CHECK_THROWS_AS(epsilon_of(spec), SingularityError);
}

TEST_CASE("factor preconditions") {
  // epsilon >= 1/3: a large rotation
  const ChainSpec big = ChainSpec::repeated(Ptm::rot_z(0.5), 10);
  REQUIRE(epsilon_of(big).epsilon >= 1.0 / 3.0);
  CHECK_THROWS_AS(second_order_factor(big, 5, Pauli::X), PreconditionError);

  const ChainSpec ok = ChainSpec::repeated(Ptm::rot_z(0.05), 10);
  CHECK_THROWS_AS(second_order_factor(ok, 2, Pauli::X), DomainError);
  CHECK_THROWS_AS(third_order_factor(ok, 3, Pauli::X), DomainError);
}

TEST_CASE("factors degenerate to exact twirl products for Pauli inputs") {
  const Ptm flip = Ptm::pauli_channel(0.01, 0.02, 0.03);
  const ChainSpec spec = ChainSpec::repeated(flip, 10);
  const std::vector<Ptm> series = exact_average_series(spec);
  for (int t = 3; t <= 10; ++t) {
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      const FactorInterval f = second_order_factor(spec, t, p);
      CHECK(f.hi - f.lo < 1e-14);
      const double exact_ratio =
          series[static_cast<std::size_t>(t - 1)](p, p) /
          series[static_cast<std::size_t>(t - 2)](p, p);
      CHECK(f.lo == doctest::Approx(exact_ratio).epsilon(1e-12));
      if (t >= 4) {
        const FactorInterval f3 = third_order_factor(spec, t, p);
        CHECK(f3.hi - f3.lo < 1e-14);
        const double two_step =
            series[static_cast<std::size_t>(t - 1)](p, p) /
            series[static_cast<std::size_t>(t - 3)](p, p);
        CHECK(f3.lo == doctest::Approx(two_step).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("containment of exact ratios in the factor intervals") {
  const Ptm e = Ptm::rot_axis(Vec3(3, 1, 2), 0.08);
  const ChainSpec spec = ChainSpec::repeated(e, 100);
  const std::vector<Ptm> series = exact_average_series(spec);
  for (int t = 3; t <= 100; ++t) {
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      const double ratio = series[static_cast<std::size_t>(t - 1)](p, p) /
                           series[static_cast<std::size_t>(t - 2)](p, p);
      const FactorInterval f = second_order_factor(spec, t, p);
      CHECK(f.lo <= ratio + 1e-13);
      CHECK(ratio <= f.hi + 1e-13);
      if (t >= 4) {
        const double two_step = series[static_cast<std::size_t>(t - 1)](p, p) /
                                series[static_cast<std::size_t>(t - 3)](p, p);
        const FactorInterval f3 = third_order_factor(spec, t, p);
        CHECK(f3.lo <= two_step + 1e-13);
        CHECK(two_step <= f3.hi + 1e-13);
      }
    }
  }
}

TEST_CASE("containment holds for random chains with moderate epsilon") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    ChainSpec spec;
    for (int t = 0; t < 40; ++t) {
      spec.errors.push_back(random_channel(rng, 0.12, 0.02));
    }
    if (epsilon_of(spec).epsilon >= 0.3) continue;
    const std::vector<Ptm> series = exact_average_series(spec);
    for (int t = 3; t <= 40; ++t) {
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        const double ratio = series[static_cast<std::size_t>(t - 1)](p, p) /
                             series[static_cast<std::size_t>(t - 2)](p, p);
        const FactorInterval f = second_order_factor(spec, t, p);
        CHECK(f.lo <= ratio + 1e-12);
        CHECK(ratio <= f.hi + 1e-12);
      }
    }
  }
}

TEST_CASE("rot_z factor structure at even t") {
  const double theta = 0.1;
  const ChainSpec spec = ChainSpec::repeated(Ptm::rot_z(theta), 10);
  // the X-coherence cross term vanishes at even t, leaving cos(2 theta)
  const FactorInterval f = second_order_factor(spec, 6, Pauli::X);
  const double mid = 0.5 * (f.lo + f.hi);
  CHECK(mid == doctest::Approx(std::cos(2.0 * theta)).epsilon(1e-3));
}

TEST_CASE("infidelity band: Pauli channels give a zero-width exact band") {
  const Ptm flip = Ptm::pauli_channel(0.01, 0.0, 0.02);
  const ChainSpec spec = ChainSpec::repeated(flip, 30);
  const std::vector<Ptm> series = exact_average_series(spec);
  for (int order : {2, 3}) {
    const InfidelityBand band = infidelity_band(spec, 30, order);
    for (int t = 1; t <= 30; ++t) {
      const double r =
          average_infidelity(series[static_cast<std::size_t>(t - 1)]);
      CHECK(band.r_lo[static_cast<std::size_t>(t - 1)] ==
            doctest::Approx(r).epsilon(1e-10));
      CHECK(band.r_hi[static_cast<std::size_t>(t - 1)] ==
            doctest::Approx(r).epsilon(1e-10));
    }
  }
}

TEST_CASE("infidelity band contains the exact series; order 3 is tighter") {
  for (double theta : {0.08, 0.04}) {
    const Ptm e = Ptm::rot_axis(Vec3(3, 1, 2), theta);
    const ChainSpec spec = ChainSpec::repeated(e, 100);
    const std::vector<Ptm> series = exact_average_series(spec);
    const InfidelityBand b2 = infidelity_band(spec, 100, 2);
    const InfidelityBand b3 = infidelity_band(spec, 100, 3);
    for (int t = 1; t <= 100; ++t) {
      const double r =
          average_infidelity(series[static_cast<std::size_t>(t - 1)]);
      if (t > 2) {
        CHECK(b2.r_lo[static_cast<std::size_t>(t - 1)] <= r + 1e-12);
        CHECK(r <= b2.r_hi[static_cast<std::size_t>(t - 1)] + 1e-12);
      }
      if (t >= 4) {
        CHECK(b3.r_lo[static_cast<std::size_t>(t - 1)] <= r + 1e-12);
        CHECK(r <= b3.r_hi[static_cast<std::size_t>(t - 1)] + 1e-12);
      }
    }
    const double w2 = b2.r_hi[99] - b2.r_lo[99];
    const double w3 = b3.r_hi[99] - b3.r_lo[99];
    CHECK(w3 < w2);
  }
}

TEST_CASE("corollary_linear_bound") {
  CHECK(corollary_linear_bound(0.01, 10) == doctest::Approx(0.85));
  CHECK(corollary_linear_bound(0.0, 5) == 0.0);
  CHECK_THROWS_AS(corollary_linear_bound(0.02, 5), PreconditionError);
}

TEST_CASE("linear bound dominates random chains at r0 = 0.005") {
  std::mt19937_64 rng(71);
  const double r0 = 0.005;
  for (int trial = 0; trial < 20; ++trial) {
    Ptm e = random_channel(rng, 0.3, 0.05);
    const double r = average_infidelity(e);
    REQUIRE(r > 0.0);
    e = mix_with_identity(e, r0 / r);
    REQUIRE(average_infidelity(e) == doctest::Approx(r0).epsilon(1e-10));
    const ChainSpec spec = ChainSpec::repeated(e, 60);
    const std::vector<Ptm> series = exact_average_series(spec);
    for (int t = 1; t <= 60; ++t) {
      CHECK(average_infidelity(series[static_cast<std::size_t>(t - 1)]) <=
            corollary_linear_bound(r0, t) + 1e-12);
    }
  }
}

TEST_CASE("proof-chain ratio bound stays below 1/3 at r0 = 1/100") {
  // the coherence-to-incoherence ratio implied by r0 = 1/100; the exact
  // value is 0.252525..., safely inside the < 1/3 regime the per-step
  // factors require
  const double r0 = 0.01;
  const double bound = std::sqrt(6.0 * r0) / (1.0 - 3.0 * r0);
  CHECK(bound < 1.0 / 3.0);
  CHECK(bound == doctest::Approx(0.25252471577).epsilon(1e-9));
}

TEST_CASE("simple proof estimate: zeros and the rot_z closed form") {
  RotationSchedule zeros;
  zeros.theta.assign(10, Vec3::Zero());
  const SimpleEstimate est0 = simple_proof_estimate(zeros);
  for (double r : est0.r) CHECK(r == 0.0);
  CHECK_FALSE(est0.small_angle_warning);

  const double theta = 0.02;
  RotationSchedule sched;
  sched.theta.assign(12, Vec3(0, 0, theta));
  const SimpleEstimate est = simple_proof_estimate(sched);
  for (int t = 1; t <= 12; ++t) {
    CHECK(est.r[static_cast<std::size_t>(t - 1)] ==
          doctest::Approx((2.0 / 3.0) * theta * theta * t).epsilon(1e-12));
  }
}

TEST_CASE("simple proof estimate warns outside the small-angle regime") {
  RotationSchedule sched;
  sched.theta.assign(20, Vec3(0, 0, 0.05));  // 20 * 0.05 = 1.0 > 0.3
  CHECK(simple_proof_estimate(sched).small_angle_warning);
}

TEST_CASE("simple proof estimate tracks the exact chain at small angles") {
  const double theta = 0.04;
  const Vec3 axis = Vec3(3, 1, 2).normalized() * theta;
  RotationSchedule sched;
  sched.theta.assign(20, axis);
  const SimpleEstimate est = simple_proof_estimate(sched);

  const ChainSpec spec =
      ChainSpec::repeated(Ptm::rot_axis(Vec3(3, 1, 2), theta), 20);
  const std::vector<Ptm> series = exact_average_series(spec);
  const double exact = average_infidelity(series[19]);
  CHECK(std::abs(est.r[19] - exact) / exact < 0.15);
}

TEST_CASE("estimate reduces to randomized compiling when correlations vanish") {
  // pure Z rotations: adjacent frames rotate the axis into orthogonal
  // directions, so only the twirl term survives
  const double theta = 0.05;
  RotationSchedule sched;
  sched.theta.assign(10, Vec3(0, 0, theta));
  const SimpleEstimate est = simple_proof_estimate(sched);
  const ChainSpec spec = ChainSpec::repeated(Ptm::rot_z(theta), 10);
  for (int t = 1; t <= 10; ++t) {
    const double rc =
        average_infidelity(randomized_compiling_channel(spec, t));
    CHECK(est.r[static_cast<std::size_t>(t - 1)] ==
          doctest::Approx(rc).epsilon(0.01));
  }
}
