#include <doctest.h>

#include <cmath>

#include "telenoise/foliation.hpp"
#include "test_support.hpp"

using namespace telenoise;
using telenoise::testing::max_abs_diff;

TEST_CASE("validate_code accepts the [[4,1,2]] code") {
  CHECK(validate_code(CssCode::four_one_two()).empty());
}

TEST_CASE("validate_code flags non-orthogonal checks") {
  CssCode bad = CssCode::four_one_two();
  bad.z_checks[0] = {1, 0, 0, 0};  // overlaps XXXX on one qubit
  const auto violations = validate_code(bad);
  CHECK_FALSE(violations.empty());
}

TEST_CASE("validate_code accepts the degenerate repetition code") {
  const CssCode rep = CssCode::repetition(5);
  CHECK(rep.x_checks.empty());
  CHECK(validate_code(rep).empty());
}

TEST_CASE("combine_round_errors: rotations add angles") {
  const double theta = 0.12;
  std::vector<PureZKraus> slots(5, PureZKraus::rot_z(theta));
  const PureZKraus combined = combine_round_errors(slots);
  CHECK(std::abs(combined.alpha - std::cos(5.0 * theta)) < 1e-14);
  CHECK(std::abs(combined.beta -
                 std::complex<double>(0.0, std::sin(5.0 * theta))) < 1e-14);

  CHECK(std::abs(combine_round_errors({PureZKraus::rot_z(theta)}).alpha -
                 std::cos(theta)) < 1e-15);

  const PureZKraus cancel = combine_round_errors(
      {PureZKraus::rot_z(theta), PureZKraus::rot_z(-theta)});
  CHECK(std::abs(cancel.alpha - 1.0) < 1e-14);
  CHECK(std::abs(cancel.beta) < 1e-14);
}

TEST_CASE("PureZKraus validation and phase normalization") {
  CHECK_THROWS_AS(PureZKraus::make(1.0, 0.5), NumericConsistencyError);
  const PureZKraus k = PureZKraus::make(std::complex<double>(0.0, 0.8),
                                        std::complex<double>(0.6, 0.0));
  CHECK(k.alpha.real() == doctest::Approx(0.8));
  CHECK(k.alpha.imag() == doctest::Approx(0.0));
}

TEST_CASE("replacement round trip") {
  for (int w = 1; w <= 8; ++w) {
    for (double p = 0.0; p <= 0.5 + 1e-9; p += 0.025) {
      const double flip = 0.5 * (1.0 - std::pow(1.0 - 2.0 * p, w));
      const std::complex<double> beta(std::sqrt(flip), 0.0);
      const auto entry = code_qubit_replacement(beta, w, true);
      CHECK(entry.axis == FlipAxis::X);
      const auto anc = ancilla_replacement(beta, w);
      CHECK(anc.axis == FlipAxis::Z);
      CHECK(anc.p == entry.p);
      // composing W slots always recovers the combined flip probability
      CHECK(std::abs(0.5 * (1.0 - std::pow(1.0 - 2.0 * entry.p, w)) - flip) <
            1e-12);
      // the slot probability itself is exact wherever (1-2p)^W retains
      // double precision; near p = 1/2 the information is not representable
      // in |beta|^2
      if (std::pow(1.0 - 2.0 * p, w) >= 1e-4) {
        CHECK(std::abs(entry.p - p) < 1e-12);
      }
    }
  }
}

TEST_CASE("replacement formula edge cases") {
  CHECK(code_qubit_replacement(0.0, 3, false).p == 0.0);
  CHECK(code_qubit_replacement(0.0, 3, false).axis == FlipAxis::Z);
  // W = 1 passes |beta|^2 straight through
  const auto w1 = code_qubit_replacement(std::sqrt(0.02), 1, true);
  CHECK(w1.p == doctest::Approx(0.02).epsilon(1e-14));
  // even W with 1 - 2|beta|^2 < 0 has no real root
  CHECK_THROWS_AS(ancilla_replacement(std::sqrt(0.75), 2), DomainError);
  // odd W takes the real (negative) root; p may exceed 1/2
  const auto sure = ancilla_replacement(1.0, 5);
  CHECK(sure.p == doctest::Approx(1.0));
  CHECK_THROWS_AS(ancilla_replacement(1.5, 3), DomainError);
}

TEST_CASE("composed slot channels reproduce the combined flip probability") {
  // W compositions of the returned flip channel give back |beta|^2
  const double theta = 0.02;
  const int w = 5;
  const PureZKraus combined = combine_round_errors(
      std::vector<PureZKraus>(static_cast<std::size_t>(w), PureZKraus::rot_z(theta)));
  const auto entry = code_qubit_replacement(combined.beta, w, false);
  const double flip = std::norm(combined.beta);
  CHECK(flip == doctest::Approx(std::pow(std::sin(w * theta), 2)));
  CHECK(0.5 * (1.0 - std::pow(1.0 - 2.0 * entry.p, w)) ==
        doctest::Approx(flip).epsilon(1e-12));
}

TEST_CASE("default slot counts follow the documented convention") {
  const auto slots = default_slot_counts(CssCode::four_one_two());
  // code qubits: 1 X check + 1 Z check incident, plus 2
  for (int gamma = 1; gamma <= 4; ++gamma) {
    CHECK(slots.at(gamma) == 4);
  }
  CHECK(slots.at(5) == 6);  // XXXX ancilla: weight 4 + 2
  CHECK(slots.at(6) == 4);  // Z1Z2 ancilla
  CHECK(slots.at(7) == 4);  // Z3Z4 ancilla
}

TEST_CASE("convert_noise_model: identity noise maps to zero probabilities") {
  const CssCode code = CssCode::four_one_two();
  FoliationNoiseModel model = FoliationNoiseModel::homogeneous(
      code, 1, PureZKraus{}, default_slot_counts(code));
  const PauliReplacement rep = convert_noise_model(model);
  CHECK_FALSE(rep.probs.empty());
  for (const auto& [loc, entry] : rep.probs) {
    CHECK(entry.p == 0.0);
  }
}

TEST_CASE("convert_noise_model: homogeneous rotation") {
  const CssCode code = CssCode::four_one_two();
  const double theta = 0.1;
  FoliationNoiseModel model = FoliationNoiseModel::homogeneous(
      code, 1, PureZKraus::rot_z(theta), default_slot_counts(code));
  const PauliReplacement rep = convert_noise_model(model);

  for (const auto& [loc, entry] : rep.probs) {
    const QubitKind kind = model.kind_of(loc.gamma);
    const int w = model.w_of(loc.gamma);
    // all slots at (gamma, t) carry the same p; the combined flip is
    // sin^2(W theta)
    const double flip = std::pow(std::sin(w * theta), 2);
    const double expect_p =
        0.5 * (1.0 - std::pow(1.0 - 2.0 * flip, 1.0 / static_cast<double>(w)));
    CHECK(entry.p == doctest::Approx(expect_p).epsilon(1e-12));
    if (kind == QubitKind::code) {
      CHECK(entry.axis == (loc.t % 2 == 1 ? FlipAxis::X : FlipAxis::Z));
    } else {
      CHECK(entry.axis == FlipAxis::Z);
    }
  }
}

TEST_CASE("convert_noise_model: pi/10 on a W = 5 ancilla always flips") {
  CssCode code = CssCode::four_one_two();
  FoliationNoiseModel model;
  model.code = code;
  model.rounds = 1;
  model.slots = default_slot_counts(code);
  model.slots[6] = 5;
  const double theta = M_PI / 10.0;
  for (int w = 1; w <= 5; ++w) {
    model.channels[SpacetimeLocation{6, 2, w}] = PureZKraus::rot_z(theta);
  }
  const PauliReplacement rep = convert_noise_model(model);
  // combined angle pi/2: the measurement flips with certainty
  const auto entry = rep.probs.at(SpacetimeLocation{6, 2, 1});
  CHECK(entry.p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("convert_noise_model rejects inactive locations") {
  CssCode code = CssCode::four_one_two();
  FoliationNoiseModel model;
  model.code = code;
  model.rounds = 1;
  model.slots = default_slot_counts(code);
  // X ancilla only exists at odd t
  model.channels[SpacetimeLocation{5, 2, 1}] = PureZKraus::rot_z(0.1);
  CHECK_THROWS_AS(convert_noise_model(model), DomainError);
}

TEST_CASE("convert_general_channel: single-term inputs match the rank-1 path") {
  const double theta = 0.07;
  const int w = 4;
  std::vector<GeneralPureZChannel> generals;
  std::vector<PureZKraus> rank1;
  for (int i = 0; i < w; ++i) {
    const PureZKraus k = PureZKraus::rot_z(theta);
    rank1.push_back(k);
    GeneralPureZChannel g;
    g.terms.push_back({1.0, k.alpha, k.beta});
    generals.push_back(g);
  }
  const auto from_general = convert_general_channel(generals, FlipAxis::Z);
  const auto from_rank1 =
      ancilla_replacement(combine_round_errors(rank1).beta, w);
  CHECK(std::abs(from_general.p - from_rank1.p) < 1e-13);
}

TEST_CASE("convert_general_channel: two-term mixture averages the tuples") {
  const double theta = 0.2;
  GeneralPureZChannel mix;
  mix.terms.push_back(
      {0.5, std::cos(theta), std::complex<double>(0.0, std::sin(theta))});
  mix.terms.push_back(
      {0.5, std::cos(theta), std::complex<double>(0.0, -std::sin(theta))});
  mix.validate();
  const auto entry = convert_general_channel({mix}, FlipAxis::Z);
  // both tuples have |beta|^2 = sin^2 theta, so the average is the same
  CHECK(entry.p ==
        doctest::Approx(std::pow(std::sin(theta), 2)).epsilon(1e-13));

  // rotation with probability 1/2, identity otherwise: the flip halves
  GeneralPureZChannel half;
  half.terms.push_back(
      {0.5, std::cos(theta), std::complex<double>(0.0, std::sin(theta))});
  half.terms.push_back({0.5, 1.0, 0.0});
  half.validate();
  const auto half_entry = convert_general_channel({half}, FlipAxis::X);
  CHECK(half_entry.p ==
        doctest::Approx(0.5 * std::pow(std::sin(theta), 2)).epsilon(1e-13));
  CHECK(half_entry.axis == FlipAxis::X);
}

TEST_CASE("convert_general_channel enforces the tuple cap") {
  GeneralPureZChannel big;
  for (int i = 0; i < 40; ++i) {
    big.terms.push_back({1.0 / 40.0, 1.0, 0.0});
  }
  big.validate();
  std::vector<GeneralPureZChannel> slots(4, big);
  CHECK_THROWS_AS(convert_general_channel(slots, FlipAxis::Z, 1000),
                  ResourceLimitError);
}

TEST_CASE("GeneralPureZChannel rejects negative coefficients") {
  GeneralPureZChannel bad;
  bad.terms.push_back({1.5, 1.0, 0.0});
  bad.terms.push_back({-0.5, 1.0, 0.0});
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("pure_z_channel_from_kraus gates impure channels") {
  KrausSet xrot;
  xrot.ops.push_back(std::cos(0.1) * Mat2c::Identity() +
                     std::complex<double>(0, 1) * std::sin(0.1) *
                         pauli_matrix(Pauli::X));
  CHECK_THROWS_AS(pure_z_channel_from_kraus(xrot), PreconditionError);

  KrausSet zrot;
  zrot.ops.push_back(PureZKraus::rot_z(0.1).matrix());
  const PureZChannel ch = pure_z_channel_from_kraus(zrot);
  CHECK(std::holds_alternative<PureZKraus>(ch));

  // dephasing mixed with a rotation: rank 2, still pure Z
  KrausSet mixed;
  mixed.ops.push_back(PureZKraus::rot_z(0.1).matrix());
  mixed.ops.push_back(pauli_matrix(Pauli::Z));
  mixed.weights = {0.9, 0.1};
  const PureZChannel ch2 = pure_z_channel_from_kraus(mixed);
  CHECK(std::holds_alternative<GeneralPureZChannel>(ch2));
}

TEST_CASE("pure Z channels have [Z,Z] = 1 and pass the purity predicate") {
  const Ptm p = PureZKraus::rot_z(0.23).ptm();
  CHECK(is_pure_z_coherent(p));
  CHECK(p(Pauli::Z, Pauli::Z) == doctest::Approx(1.0).epsilon(1e-14));

  GeneralPureZChannel mix;
  mix.terms.push_back({0.7, std::cos(0.3), std::complex<double>(0, std::sin(0.3))});
  mix.terms.push_back({0.3, 0.0, 1.0});
  mix.validate();
  CHECK(is_pure_z_coherent(mix.ptm()));
}

TEST_CASE("cluster_stabilizer_outcomes: zero record stays zero") {
  const CssCode code = CssCode::four_one_two();
  SyndromeRecord record;
  for (int t = 1; t <= 4; ++t) {
    record.stabilizer_outcomes.push_back(BinaryRow(
        t % 2 == 1 ? code.x_checks.size() : code.z_checks.size(), 0));
    record.teleport_outcomes.push_back(BinaryRow(4, 0));
  }
  const BinaryMatrix corrected = cluster_stabilizer_outcomes(record, code);
  for (const auto& row : corrected) {
    for (auto bit : row) CHECK(bit == 0);
  }
}

TEST_CASE("cluster_stabilizer_outcomes applies the parity correction") {
  const CssCode code = CssCode::four_one_two();
  SyndromeRecord record;
  // a teleport outcome on qubit 0 at round 1 flips the raw X-check outcome;
  // the u correction cancels it
  record.teleport_outcomes.push_back({1, 0, 0, 0});
  record.teleport_outcomes.push_back({0, 0, 0, 0});
  record.stabilizer_outcomes.push_back({1});
  record.stabilizer_outcomes.push_back({0, 0});
  const BinaryMatrix corrected = cluster_stabilizer_outcomes(record, code);
  CHECK(corrected[0][0] == 0);
  CHECK(corrected[1][0] == 0);
  CHECK(corrected[1][1] == 0);
}

TEST_CASE("cluster_stabilizer_outcomes validates shapes") {
  const CssCode code = CssCode::four_one_two();
  SyndromeRecord record;
  record.teleport_outcomes.push_back({0, 0, 0, 0});
  record.stabilizer_outcomes.push_back({0, 0});  // round 1 has one X check
  CHECK_THROWS_AS(cluster_stabilizer_outcomes(record, code), DomainError);
}
