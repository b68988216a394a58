#pragma once

#include <complex>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "telenoise/css_code.hpp"
#include "telenoise/ptm.hpp"

namespace telenoise {

enum class QubitKind { code, x_ancilla, z_ancilla };
enum class FlipAxis { X, Z };

const char* to_string(FlipAxis a);

/// Space-time location (gamma, t, w); all indices are 1-based. gamma runs
/// over code qubits [1..n], then X ancillas, then Z ancillas.
struct SpacetimeLocation {
  int gamma = 1;
  int t = 1;
  int w = 1;

  auto operator<=>(const SpacetimeLocation&) const = default;
};

/// Rank-1 pure Z-coherent error N = alpha I + beta Z. The induced channel
/// N . N^dag is trace-preserving iff |alpha|^2 + |beta|^2 = 1 and
/// Re(alpha* beta) = 0.
struct PureZKraus {
  std::complex<double> alpha{1.0, 0.0};
  std::complex<double> beta{0.0, 0.0};

  static PureZKraus rot_z(double theta);
  /// Validating constructor for trace-preserving inputs.
  static PureZKraus make(std::complex<double> alpha, std::complex<double> beta,
                         double tolerance = tol::eq);

  /// Global phase chosen so alpha is real and nonnegative.
  PureZKraus normalized_phase() const;
  double trace_defect() const;
  Mat2c matrix() const;
  Ptm ptm() const;
};

/// Channel sum_i c_i N_i . N_i^dag with every N_i = alpha_i I + beta_i Z
/// (the general pure Z-coherent channel; Kraus rank may exceed 1).
struct GeneralPureZChannel {
  struct Term {
    double c = 1.0;
    std::complex<double> alpha{1.0, 0.0};
    std::complex<double> beta{0.0, 0.0};
  };
  std::vector<Term> terms;

  /// Throws unless all c_i >= 0, sum c_i (|a_i|^2+|b_i|^2) = 1 and
  /// sum c_i Re(a_i* b_i) = 0 within tolerance.
  void validate(double tolerance = tol::eq) const;
  Ptm ptm() const;
};

using PureZChannel = std::variant<PureZKraus, GeneralPureZChannel>;

Ptm channel_ptm(const PureZChannel& ch);

/// Circuit-level noise model on a foliated CSS code: a pure Z-coherent
/// channel per space-time location (absent locations are noiseless) plus
/// the per-qubit slot count W_gamma.
struct FoliationNoiseModel {
  CssCode code;
  int rounds = 1;  // L; timesteps run over t = 1..2L
  std::map<SpacetimeLocation, PureZChannel> channels;
  std::map<int, int> slots;  // gamma -> W_gamma

  int num_qubits() const {
    return code.n + code.num_x_checks() + code.num_z_checks();
  }
  QubitKind kind_of(int gamma) const;
  /// Check row index (0-based) of an ancilla gamma.
  int check_row_of(int gamma) const;
  int w_of(int gamma) const;
  /// True when a channel may sit at (gamma, t): ancillas only exist in the
  /// rounds of their own check type.
  bool location_active(int gamma, int t) const;
  void validate_locations() const;

  /// Same channel at every active location, w = 1..W_gamma.
  static FoliationNoiseModel homogeneous(const CssCode& code, int rounds,
                                         const PureZChannel& ch,
                                         const std::map<int, int>& slots);
};

/// Default W_gamma convention: check weight + 2 for ancillas, incident
/// check count + 2 for code qubits.
std::map<int, int> default_slot_counts(const CssCode& code);

/// Equivalent Pauli channels per space-time location.
struct PauliReplacement {
  struct Entry {
    FlipAxis axis = FlipAxis::Z;
    double p = 0.0;
  };
  std::map<SpacetimeLocation, Entry> probs;
};

/// Ordered operator product of rank-1 factors (all alpha I + beta Z
/// commute, so the order is immaterial); cost is linear in the slot count.
PureZKraus combine_round_errors(const std::vector<PureZKraus>& slots);

/// Per-slot flip probability p = (1 - (1 - 2|beta|^2)^(1/W)) / 2 with axis
/// X at odd t and Z at even t; W compositions of the result reproduce the
/// combined flip probability |beta|^2.
PauliReplacement::Entry code_qubit_replacement(std::complex<double> beta,
                                               int w_count, bool t_odd);

/// Same root formula with axis Z; the W-fold composition matches the
/// measurement flip probability |beta|^2.
PauliReplacement::Entry ancilla_replacement(std::complex<double> beta,
                                            int w_count);

struct ConvertOptions {
  double purity_tol = tol::purity;
  long long tuple_cap = 1000000;  // Kraus-term tuples per (gamma, t)
};

/// Exact conversion of the whole noise model into per-location Pauli
/// channels: slots at each (gamma, t) are coherently combined, converted by
/// the appropriate replacement formula and the result distributed uniformly
/// back over the w slots. Rank > 1 channels take the tuple-enumeration path.
PauliReplacement convert_noise_model(const FoliationNoiseModel& model,
                                     const ConvertOptions& opts = {});

/// Tuple-enumeration conversion for rank > 1 channels at one (gamma, t):
/// every index tuple contributes its composed rank-1 flip probability
/// weighted by the product of coefficients; the combined probability is
/// then distributed over the W slots. Reduces to the rank-1 path when every
/// channel has a single term.
PauliReplacement::Entry convert_general_channel(
    const std::vector<GeneralPureZChannel>& slots, FlipAxis axis,
    long long tuple_cap = 1000000);

/// Raw measurement outcomes of a foliation run: stabilizer outcomes per
/// round (X checks at odd t, Z checks at even t) and teleportation outcomes
/// per code qubit per round.
struct SyndromeRecord {
  BinaryMatrix stabilizer_outcomes;  // [t-1], row length = checks of that parity
  BinaryMatrix teleport_outcomes;    // [t-1], row length = n

  int rounds_times_two() const {
    return static_cast<int>(stabilizer_outcomes.size());
  }
};

/// Cluster-corrected syndromes s_t + s_{t-2} + u_t(m) (mod 2), where u_t is
/// the parity of the round-t teleportation outcomes over each stabilizer's
/// support; s_{t-2} is zero for t <= 2. All zero in the error-free circuit.
BinaryMatrix cluster_stabilizer_outcomes(const SyndromeRecord& record,
                                         const CssCode& code);

/// Purity gate for externally supplied channels: every Kraus operator must
/// be of the form alpha I + beta Z and the resulting PTM must pass
/// is_pure_z_coherent; otherwise throws PreconditionError.
PureZChannel pure_z_channel_from_kraus(const KrausSet& k,
                                       double purity_tol = tol::purity);

}  // namespace telenoise
