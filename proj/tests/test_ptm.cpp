#include <doctest.h>

#include <cmath>
#include <random>

#include "telenoise/ptm.hpp"
#include "test_support.hpp"

using namespace telenoise;
using telenoise::testing::amplitude_damping;
using telenoise::testing::max_abs_diff;
using telenoise::testing::random_channel;

TEST_CASE("ptm_from_kraus: identity Kraus gives identity PTM") {
  KrausSet k;
  k.ops.push_back(Mat2c::Identity());
  CHECK(max_abs_diff(ptm_from_kraus(k).m, Mat4::Identity()) < 1e-15);
}

TEST_CASE("ptm_from_kraus: Z rotation at theta = pi/4") {
  const Ptm p = Ptm::rot_z(M_PI / 4.0);
  CHECK(p(Pauli::I, Pauli::I) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p(Pauli::Z, Pauli::Z) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(p(Pauli::X, Pauli::X)) < 1e-14);
  CHECK(std::abs(p(Pauli::Y, Pauli::Y)) < 1e-14);
  CHECK(p(Pauli::Y, Pauli::X) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(p(Pauli::X, Pauli::Y) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ptm_from_kraus: phase-flip channel") {
  KrausSet k;
  k.ops.push_back(std::sqrt(0.9) * Mat2c::Identity());
  k.ops.push_back(std::sqrt(0.1) * pauli_matrix(Pauli::Z));
  const Ptm p = ptm_from_kraus(k);
  Mat4 expect = Mat4::Identity();
  expect(1, 1) = 0.8;
  expect(2, 2) = 0.8;
  CHECK(max_abs_diff(p.m, expect) < 1e-14);
}

TEST_CASE("ptm_from_kraus: error paths") {
  KrausSet wrong;
  wrong.ops.push_back(Mat2c::Identity());
  wrong.weights = {1.0, 2.0};
  CHECK_THROWS_AS(ptm_from_kraus(wrong), DimensionError);

  KrausSet incomplete;
  incomplete.ops.push_back(0.5 * Mat2c::Identity());
  CHECK_THROWS_AS(ptm_from_kraus(incomplete), NumericConsistencyError);

  PtmOptions waive;
  waive.require_completeness = false;
  CHECK_NOTHROW(ptm_from_kraus(incomplete, waive));
}

TEST_CASE("trace preservation of random Kraus channels") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    CHECK(is_trace_preserving(random_channel(rng)));
  }
}

TEST_CASE("compose basics") {
  std::mt19937_64 rng(11);
  const Ptm a = random_channel(rng);
  CHECK(max_abs_diff(compose(Ptm::identity(), a).m, a.m) < 1e-15);

  const Ptm z = Ptm::pauli_unitary(Pauli::Z);
  CHECK(max_abs_diff(compose(z, z).m, Mat4::Identity()) < 1e-15);

  const Ptm sum = Ptm::rot_z(0.3 + 0.45);
  CHECK(max_abs_diff(compose(Ptm::rot_z(0.3), Ptm::rot_z(0.45)).m, sum.m) <
        1e-14);
}

TEST_CASE("compose is associative on random triples") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const Ptm a = random_channel(rng), b = random_channel(rng),
              c = random_channel(rng);
    CHECK(max_abs_diff(compose(compose(a, b), c).m,
                       compose(a, compose(b, c)).m) < 1e-13);
  }
}

TEST_CASE("pauli_twirl: diagonal channels are fixed points") {
  const Ptm p = Ptm::pauli_channel(0.05, 0.1, 0.2);
  CHECK(max_abs_diff(pauli_twirl(p).m, p.m) < 1e-15);
}

TEST_CASE("pauli_twirl of a Z rotation") {
  const double theta = 0.37;
  const Ptm t = pauli_twirl(Ptm::rot_z(theta));
  Mat4 expect = Mat4::Identity();
  expect(1, 1) = std::cos(2.0 * theta);
  expect(2, 2) = std::cos(2.0 * theta);
  CHECK(max_abs_diff(t.m, expect) < 1e-14);
  // same channel as a phase flip with p = sin^2 theta
  const double p = std::sin(theta) * std::sin(theta);
  CHECK(max_abs_diff(t.m, Ptm::pauli_channel(0.0, 0.0, p).m) < 1e-14);
}

TEST_CASE("pauli_twirl of amplitude damping") {
  PtmOptions opts;
  const Ptm ad = ptm_from_kraus(amplitude_damping(0.1), opts);
  const Ptm t = pauli_twirl(ad);
  Mat4 expect = Mat4::Identity();
  expect(1, 1) = std::sqrt(0.9);
  expect(2, 2) = std::sqrt(0.9);
  expect(3, 3) = 0.9;
  CHECK(max_abs_diff(t.m, expect) < 1e-14);
}

TEST_CASE("twirl preserves average infidelity") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const Ptm e = random_channel(rng);
    CHECK(average_infidelity(pauli_twirl(e)) ==
          doctest::Approx(average_infidelity(e)).epsilon(1e-15));
  }
}

TEST_CASE("coherence_decompose: reconstruction and sign law") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    const Ptm e = random_channel(rng);
    const CoherenceParts parts = coherence_decompose(e);
    CHECK(max_abs_diff(parts.sum(), e.m) < 1e-12);
    CHECK(max_abs_diff(parts.part(Pauli::I), pauli_twirl(e).m) < 1e-14);

    // conjugation by X^x Z^z flips the signs (-1)^z, (-1)^(x+z), (-1)^x on
    // the X, Y, Z parts
    for (int x = 0; x < 2; ++x) {
      for (int z = 0; z < 2; ++z) {
        Ptm conj = e;
        if (x) {
          const Mat4 px = Ptm::pauli_unitary(Pauli::X).m;
          conj = Ptm{px * conj.m * px};
        }
        if (z) {
          const Mat4 pz = Ptm::pauli_unitary(Pauli::Z).m;
          conj = Ptm{pz * conj.m * pz};
        }
        Mat4 expect = parts.part(Pauli::I);
        expect += ((z % 2) ? -1.0 : 1.0) * parts.part(Pauli::X);
        expect += (((x + z) % 2) ? -1.0 : 1.0) * parts.part(Pauli::Y);
        expect += ((x % 2) ? -1.0 : 1.0) * parts.part(Pauli::Z);
        CHECK(max_abs_diff(conj.m, expect) < 1e-12);
      }
    }
  }
}

TEST_CASE("coherence_decompose: axis classification") {
  const CoherenceParts pauli_parts =
      coherence_decompose(Ptm::pauli_channel(0.1, 0.05, 0.2));
  CHECK(pauli_parts.part(Pauli::X).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(pauli_parts.part(Pauli::Y).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(pauli_parts.part(Pauli::Z).cwiseAbs().maxCoeff() < 1e-15);

  const CoherenceParts rot_parts = coherence_decompose(Ptm::rot_z(0.4));
  CHECK(rot_parts.part(Pauli::Z).cwiseAbs().maxCoeff() > 0.1);
  CHECK(rot_parts.part(Pauli::X).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(rot_parts.part(Pauli::Y).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("average_infidelity examples") {
  CHECK(average_infidelity(Ptm::identity()) == 0.0);
  const double p = 0.12;
  CHECK(average_infidelity(Ptm::pauli_channel(0.0, 0.0, p)) ==
        doctest::Approx(2.0 * p / 3.0).epsilon(1e-14));
  Mat4 depolarized = Mat4::Zero();
  depolarized(0, 0) = 1.0;
  CHECK(average_infidelity(Ptm{depolarized}) == doctest::Approx(0.5));
}

TEST_CASE("is_pure_z_coherent") {
  CHECK(is_pure_z_coherent(Ptm::rot_z(0.3)));
  CHECK_FALSE(is_pure_z_coherent(Ptm::rot_axis(Vec3(1, 0, 0), 0.3)));
  CHECK(is_pure_z_coherent(Ptm::pauli_channel(0.0, 0.0, 0.2)));
  CHECK_FALSE(is_pure_z_coherent(Ptm::pauli_channel(0.1, 0.0, 0.0)));
}

TEST_CASE("is_pauli") {
  CHECK(is_pauli(Ptm::pauli_channel(0.1, 0.2, 0.3)));
  CHECK_FALSE(is_pauli(Ptm::rot_z(0.2)));
}
