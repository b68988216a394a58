#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "telenoise/foliation.hpp"
#include "telenoise/pauli_basis.hpp"
#include "telenoise/pauli_string.hpp"

namespace telenoise {

inline constexpr int kQubitCap = 12;

/// Dense density operator (possibly subnormalized when conditioned on
/// measurement outcomes).
struct DensityMatrix {
  Eigen::MatrixXcd mat;
  int qubits = 0;

  static DensityMatrix from_matrix(const Eigen::MatrixXcd& m,
                                   double tolerance = tol::eq);
  double trace() const { return mat.trace().real(); }
};

/// Codespace projector (product of (I + S)/2 over the check generators).
Eigen::MatrixXcd codespace_projector(const CssCode& code);

/// Logical computational basis state |b> of a k = 1 code.
Eigen::VectorXcd logical_basis_state(const CssCode& code, int bit);

enum class OutcomePolicy { enumerate_all, fixed_record, sample };

/// A prepared simulation: the effective foliation circuit of a code plus
/// the combined per-(gamma, t) channels of either the coherent model or a
/// Pauli replacement.
struct FoliationRun {
  CssCode code;
  int rounds = 1;
  std::map<std::pair<int, int>, Ptm> round_channels;  // (gamma, t) -> combined
  OutcomePolicy policy = OutcomePolicy::enumerate_all;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::int64_t enumeration_cap = std::int64_t{1} << 24;

  static FoliationRun coherent(const FoliationNoiseModel& model);
  static FoliationRun pauli(const CssCode& code, int rounds,
                            const PauliReplacement& replacement);
};

struct CircuitOp {
  enum class Kind {
    teleport,       // Kraus H Z^m on one code qubit (branches on m)
    code_noise,     // combined channel slot at (gamma, t)
    ancilla_prep,   // reset the shared ancilla to |+>
    cz,             // CZ between a support qubit and the ancilla
    ancilla_noise,  // combined ancilla channel right before measurement
    measure,        // ancilla X measurement (branches on s)
    frame_inverse,  // final Pauli frame correction on one code qubit
  };
  Kind kind{};
  int qubit = 0;      // code qubit (0-based) for teleport/cz/frame_inverse
  int gamma = 0;      // 1-based noise location
  int t = 0;          // foliation timestep
  int check_row = 0;  // 0-based row within the round's check matrix
};

/// Ordered effective circuit in the reusable-ancilla picture: per round,
/// teleport Kraus + combined code noise per qubit, then per check row of the
/// round's parity an ancilla prep / CZ fan-out / ancilla noise / X
/// measurement, with the frame correction appended after the last round.
/// X checks run at odd t, Z checks at even t.
std::vector<CircuitOp> build_effective_circuit(const CssCode& code, int rounds,
                                               int qubit_cap = kQubitCap);

struct ConditionalResult {
  double probability = 0.0;
  std::vector<Mat4> logical_ptms;  // one per logical qubit
  bool ptm_defined = false;
};

/// Runs the circuit along one fixed outcome record; the logical channel is
/// extracted by process tomography in the code's logical Pauli basis and
/// renormalized by the branch probability.
ConditionalResult run_conditional(const FoliationRun& run,
                                  const SyndromeRecord& record);

struct LogicalGroup {
  std::vector<std::uint8_t> syndrome;  // corrected bits, rounds in order
  double probability = 0.0;
  std::vector<Mat4> logical_ptms;
  bool ptm_defined = false;
};

struct LogicalChannelReport {
  std::vector<LogicalGroup> groups;  // sorted by syndrome
  double total_probability() const;
};

/// Enumerates (or samples) all outcome strings, groups them by corrected
/// cluster syndrome and probability-averages the conditioned channels
/// within each group.
LogicalChannelReport averaged_logical_report(const FoliationRun& run);

struct Theorem2Group {
  std::vector<std::uint8_t> syndrome;
  double prob_coherent = 0.0;
  double prob_pauli = 0.0;
  double max_ptm_delta = 0.0;
};

struct Theorem2Report {
  double max_prob_deviation = 0.0;
  double max_ptm_deviation = 0.0;
  std::vector<Theorem2Group> groups;
  /// Deviations when grouping by the raw (uncorrected) stabilizer outcomes;
  /// reported for information, not asserted by the equivalence statement.
  double raw_max_prob_deviation = 0.0;
  double raw_max_ptm_deviation = 0.0;
};

/// Runs the coherent model and its Pauli replacement through
/// averaged_logical_report and reports the worst per-group deviation.
Theorem2Report verify_theorem2(const FoliationNoiseModel& model,
                               const ConvertOptions& opts = {});

/// Applies a single-qubit channel to a code state and checks that the
/// result carries no coherence between different stabilizer eigenspaces.
bool stabilizer_eigenstate_check(const CssCode& code, const Ptm& error,
                                 int qubit, const DensityMatrix& state,
                                 double tolerance = tol::eq);

struct NoisyMeasurementBranch {
  double probability = 0.0;
  DensityMatrix post;  // normalized when probability > 0
};

/// One Z-type stabilizer measured through the CZ-ancilla gadget with a pure
/// Z-coherent error on the ancilla right before its X measurement. Returns
/// both outcome branches.
std::array<NoisyMeasurementBranch, 2> noisy_z_stabilizer_measurement(
    const DensityMatrix& state, const BinaryRow& support,
    const PureZKraus& ancilla_error);

}  // namespace telenoise
