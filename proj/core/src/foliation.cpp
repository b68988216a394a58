#include "telenoise/foliation.hpp"
#include <limits>

#include <cmath>
#include <sstream>

namespace telenoise {

namespace {

std::string location_str(const SpacetimeLocation& loc) {
  std::ostringstream msg;
  msg << "(gamma=" << loc.gamma << ", t=" << loc.t << ", w=" << loc.w << ")";
  return msg.str();
}

}  // namespace

const char* to_string(FlipAxis a) { return a == FlipAxis::X ? "X" : "Z"; }

PureZKraus PureZKraus::rot_z(double theta) {
  return PureZKraus{std::cos(theta), std::complex<double>(0.0, std::sin(theta))};
}

PureZKraus PureZKraus::make(std::complex<double> alpha,
                            std::complex<double> beta, double tolerance) {
  PureZKraus k{alpha, beta};
  if (k.trace_defect() > tolerance) {
    std::ostringstream msg;
    msg << "PureZKraus: not trace-preserving (defect " << k.trace_defect()
        << ")";
    throw NumericConsistencyError(msg.str());
  }
  return k.normalized_phase();
}

double PureZKraus::trace_defect() const {
  const double norm = std::norm(alpha) + std::norm(beta);
  const double cross = std::real(std::conj(alpha) * beta);
  return std::max(std::abs(norm - 1.0), std::abs(2.0 * cross));
}

PureZKraus PureZKraus::normalized_phase() const {
  const double mag = std::abs(alpha);
  if (mag == 0.0) return *this;
  const std::complex<double> phase = std::conj(alpha) / mag;
  return PureZKraus{mag, beta * phase};
}

Mat2c PureZKraus::matrix() const {
  Mat2c m;
  m << alpha + beta, 0.0, 0.0, alpha - beta;
  return m;
}

Ptm PureZKraus::ptm() const {
  KrausSet k;
  k.ops.push_back(matrix());
  PtmOptions opts;
  opts.require_completeness = false;  // caller validates trace preservation
  return ptm_from_kraus(k, opts);
}

void GeneralPureZChannel::validate(double tolerance) const {
  if (terms.empty()) {
    throw DomainError("GeneralPureZChannel: no terms");
  }
  double norm = 0.0, cross = 0.0;
  for (const Term& term : terms) {
    if (term.c < 0.0) {
      throw DomainError(
          "GeneralPureZChannel: coefficients must be nonnegative");
    }
    norm += term.c * (std::norm(term.alpha) + std::norm(term.beta));
    cross += term.c * std::real(std::conj(term.alpha) * term.beta);
  }
  if (std::abs(norm - 1.0) > tolerance || std::abs(2.0 * cross) > tolerance) {
    std::ostringstream msg;
    msg << "GeneralPureZChannel: trace preservation violated (norm " << norm
        << ", cross " << cross << ")";
    throw NumericConsistencyError(msg.str());
  }
}

Ptm GeneralPureZChannel::ptm() const {
  KrausSet k;
  for (const Term& term : terms) {
    k.ops.push_back(PureZKraus{term.alpha, term.beta}.matrix());
    k.weights.push_back(term.c);
  }
  PtmOptions opts;
  opts.require_completeness = false;
  return ptm_from_kraus(k, opts);
}

Ptm channel_ptm(const PureZChannel& ch) {
  if (std::holds_alternative<PureZKraus>(ch)) {
    return std::get<PureZKraus>(ch).ptm();
  }
  return std::get<GeneralPureZChannel>(ch).ptm();
}

QubitKind FoliationNoiseModel::kind_of(int gamma) const {
  if (gamma < 1 || gamma > num_qubits()) {
    throw DomainError("kind_of: gamma out of range");
  }
  if (gamma <= code.n) return QubitKind::code;
  if (gamma <= code.n + code.num_x_checks()) return QubitKind::x_ancilla;
  return QubitKind::z_ancilla;
}

int FoliationNoiseModel::check_row_of(int gamma) const {
  switch (kind_of(gamma)) {
    case QubitKind::x_ancilla:
      return gamma - code.n - 1;
    case QubitKind::z_ancilla:
      return gamma - code.n - code.num_x_checks() - 1;
    default:
      throw DomainError("check_row_of: gamma is a code qubit");
  }
}

int FoliationNoiseModel::w_of(int gamma) const {
  const auto it = slots.find(gamma);
  if (it == slots.end()) {
    std::ostringstream msg;
    msg << "FoliationNoiseModel: no W entry for gamma = " << gamma;
    throw DomainError(msg.str());
  }
  return it->second;
}

bool FoliationNoiseModel::location_active(int gamma, int t) const {
  if (t < 1 || t > 2 * rounds) return false;
  switch (kind_of(gamma)) {
    case QubitKind::code:
      return true;
    case QubitKind::x_ancilla:
      return t % 2 == 1;
    case QubitKind::z_ancilla:
      return t % 2 == 0;
  }
  return false;
}

void FoliationNoiseModel::validate_locations() const {
  for (const auto& [loc, ch] : channels) {
    if (loc.gamma < 1 || loc.gamma > num_qubits()) {
      throw DomainError("noise model: gamma out of range at " +
                        location_str(loc));
    }
    if (!location_active(loc.gamma, loc.t)) {
      throw DomainError("noise model: inactive location " + location_str(loc));
    }
    if (loc.w < 1 || loc.w > w_of(loc.gamma)) {
      throw DomainError("noise model: slot w out of range at " +
                        location_str(loc));
    }
    (void)ch;
  }
}

FoliationNoiseModel FoliationNoiseModel::homogeneous(
    const CssCode& code, int rounds, const PureZChannel& ch,
    const std::map<int, int>& slots) {
  FoliationNoiseModel model;
  model.code = code;
  model.rounds = rounds;
  model.slots = slots;
  for (int gamma = 1; gamma <= model.num_qubits(); ++gamma) {
    for (int t = 1; t <= 2 * rounds; ++t) {
      if (!model.location_active(gamma, t)) continue;
      for (int w = 1; w <= model.w_of(gamma); ++w) {
        model.channels[SpacetimeLocation{gamma, t, w}] = ch;
      }
    }
  }
  return model;
}

std::map<int, int> default_slot_counts(const CssCode& code) {
  std::map<int, int> slots;
  for (int i = 0; i < code.n; ++i) {
    int incident = 0;
    for (const auto& row : code.x_checks) {
      incident += row[static_cast<std::size_t>(i)];
    }
    for (const auto& row : code.z_checks) {
      incident += row[static_cast<std::size_t>(i)];
    }
    slots[i + 1] = incident + 2;
  }
  int gamma = code.n + 1;
  for (const auto& row : code.x_checks) {
    int weight = 0;
    for (auto b : row) weight += b;
    slots[gamma++] = weight + 2;
  }
  for (const auto& row : code.z_checks) {
    int weight = 0;
    for (auto b : row) weight += b;
    slots[gamma++] = weight + 2;
  }
  return slots;
}

PureZKraus combine_round_errors(const std::vector<PureZKraus>& slots) {
  std::complex<double> alpha(1.0, 0.0), beta(0.0, 0.0);
  for (const PureZKraus& k : slots) {
    const std::complex<double> a = k.alpha * alpha + k.beta * beta;
    const std::complex<double> b = k.alpha * beta + k.beta * alpha;
    alpha = a;
    beta = b;
  }
  return PureZKraus{alpha, beta}.normalized_phase();
}

namespace {

double slot_probability(double combined_flip, int w_count) {
  if (combined_flip < 0.0 || combined_flip > 1.0) {
    throw DomainError("replacement: |beta|^2 outside [0, 1]");
  }
  if (w_count < 1) {
    throw DomainError("replacement: W must be >= 1");
  }
  double base = 1.0 - 2.0 * combined_flip;
  if (base < 0.0 && base > -4.0 * std::numeric_limits<double>::epsilon()) {
    base = 0.0;  // |beta|^2 = 1/2 up to rounding
  }
  double root;
  if (base >= 0.0) {
    root = std::pow(base, 1.0 / static_cast<double>(w_count));
  } else if (w_count % 2 == 1) {
    root = -std::pow(-base, 1.0 / static_cast<double>(w_count));
  } else {
    throw DomainError(
        "replacement: 1 - 2|beta|^2 < 0 has no real even-order root");
  }
  return 0.5 * (1.0 - root);
}

}  // namespace

PauliReplacement::Entry code_qubit_replacement(std::complex<double> beta,
                                               int w_count, bool t_odd) {
  return PauliReplacement::Entry{t_odd ? FlipAxis::X : FlipAxis::Z,
                                 slot_probability(std::norm(beta), w_count)};
}

PauliReplacement::Entry ancilla_replacement(std::complex<double> beta,
                                            int w_count) {
  return PauliReplacement::Entry{FlipAxis::Z,
                                 slot_probability(std::norm(beta), w_count)};
}

PauliReplacement::Entry convert_general_channel(
    const std::vector<GeneralPureZChannel>& slots, FlipAxis axis,
    long long tuple_cap) {
  if (slots.empty()) {
    throw DomainError("convert_general_channel: no slot channels");
  }
  long long tuples = 1;
  for (const GeneralPureZChannel& ch : slots) {
    ch.validate();
    tuples *= static_cast<long long>(ch.terms.size());
    if (tuples > tuple_cap) {
      std::ostringstream msg;
      msg << "convert_general_channel: Kraus tuple count exceeds cap "
          << tuple_cap;
      throw ResourceLimitError(msg.str());
    }
  }

  const int w_count = static_cast<int>(slots.size());
  double combined_flip = 0.0;
  std::vector<std::size_t> idx(slots.size(), 0);
  while (true) {
    double weight = 1.0;
    std::complex<double> alpha(1.0, 0.0), beta(0.0, 0.0);
    for (std::size_t w = 0; w < slots.size(); ++w) {
      const auto& term = slots[w].terms[idx[w]];
      weight *= term.c;
      const std::complex<double> a = term.alpha * alpha + term.beta * beta;
      const std::complex<double> b = term.alpha * beta + term.beta * alpha;
      alpha = a;
      beta = b;
    }
    combined_flip += weight * std::norm(beta);

    std::size_t w = 0;
    while (w < idx.size() && ++idx[w] == slots[w].terms.size()) {
      idx[w] = 0;
      ++w;
    }
    if (w == idx.size()) break;
  }

  return PauliReplacement::Entry{axis,
                                 slot_probability(combined_flip, w_count)};
}

PauliReplacement convert_noise_model(const FoliationNoiseModel& model,
                                     const ConvertOptions& opts) {
  model.validate_locations();
  PauliReplacement out;
  for (int gamma = 1; gamma <= model.num_qubits(); ++gamma) {
    const QubitKind kind = model.kind_of(gamma);
    const int w_count = model.w_of(gamma);
    for (int t = 1; t <= 2 * model.rounds; ++t) {
      if (!model.location_active(gamma, t)) continue;

      std::vector<PureZKraus> rank1;
      std::vector<GeneralPureZChannel> general;
      bool any_general = false;
      bool any_present = false;
      for (int w = 1; w <= w_count; ++w) {
        const auto it = model.channels.find(SpacetimeLocation{gamma, t, w});
        PureZChannel ch = PureZKraus{};  // identity when absent
        if (it != model.channels.end()) {
          ch = it->second;
          any_present = true;
          const Ptm p = channel_ptm(ch);
          if (!is_pure_z_coherent(p, opts.purity_tol)) {
            throw PreconditionError(
                "convert_noise_model: channel at " +
                location_str(SpacetimeLocation{gamma, t, w}) +
                " is not pure Z-coherent");
          }
        }
        if (std::holds_alternative<GeneralPureZChannel>(ch)) {
          any_general = true;
          general.push_back(std::get<GeneralPureZChannel>(ch));
        } else {
          const PureZKraus k = std::get<PureZKraus>(ch);
          rank1.push_back(k);
          GeneralPureZChannel as_general;
          as_general.terms.push_back({1.0, k.alpha, k.beta});
          general.push_back(as_general);
        }
      }
      if (!any_present) continue;

      const FlipAxis axis = (kind == QubitKind::code && t % 2 == 1)
                                ? FlipAxis::X
                                : FlipAxis::Z;
      PauliReplacement::Entry entry;
      if (any_general) {
        entry = convert_general_channel(general, axis, opts.tuple_cap);
      } else {
        const PureZKraus combined = combine_round_errors(rank1);
        entry = (kind == QubitKind::code)
                    ? code_qubit_replacement(combined.beta, w_count, t % 2 == 1)
                    : ancilla_replacement(combined.beta, w_count);
      }
      for (int w = 1; w <= w_count; ++w) {
        out.probs[SpacetimeLocation{gamma, t, w}] = entry;
      }
    }
  }
  return out;
}

PureZChannel pure_z_channel_from_kraus(const KrausSet& k, double purity_tol) {
  if (k.ops.empty()) {
    throw DomainError("pure_z_channel_from_kraus: empty Kraus set");
  }
  const Ptm p = ptm_from_kraus(k);
  if (!is_pure_z_coherent(p, purity_tol)) {
    throw PreconditionError(
        "pure_z_channel_from_kraus: channel has X or Y coherence above "
        "tolerance");
  }
  GeneralPureZChannel general;
  for (std::size_t i = 0; i < k.ops.size(); ++i) {
    const Mat2c& op = k.ops[i];
    if (std::abs(op(0, 1)) > purity_tol || std::abs(op(1, 0)) > purity_tol) {
      throw PreconditionError(
          "pure_z_channel_from_kraus: Kraus operator is not of the form "
          "alpha I + beta Z");
    }
    GeneralPureZChannel::Term term;
    term.c = k.weight(i);
    term.alpha = 0.5 * (op(0, 0) + op(1, 1));
    term.beta = 0.5 * (op(0, 0) - op(1, 1));
    general.terms.push_back(term);
  }
  general.validate(tol::completeness);
  if (general.terms.size() == 1 &&
      std::abs(general.terms[0].c - 1.0) < tol::eq) {
    return PureZKraus::make(general.terms[0].alpha, general.terms[0].beta,
                            tol::completeness);
  }
  return general;
}

BinaryMatrix cluster_stabilizer_outcomes(const SyndromeRecord& record,
                                         const CssCode& code) {
  const int t_max = record.rounds_times_two();
  if (static_cast<int>(record.teleport_outcomes.size()) != t_max) {
    throw DomainError(
        "cluster_stabilizer_outcomes: stabilizer/teleport round mismatch");
  }
  BinaryMatrix corrected(static_cast<std::size_t>(t_max));
  for (int t = 1; t <= t_max; ++t) {
    const bool odd = (t % 2 == 1);
    const BinaryMatrix& checks = odd ? code.x_checks : code.z_checks;
    const BinaryRow& s_t =
        record.stabilizer_outcomes[static_cast<std::size_t>(t - 1)];
    if (s_t.size() != checks.size()) {
      std::ostringstream msg;
      msg << "cluster_stabilizer_outcomes: round " << t << " has "
          << s_t.size() << " outcomes, expected " << checks.size();
      throw DomainError(msg.str());
    }
    const BinaryRow& m_t =
        record.teleport_outcomes[static_cast<std::size_t>(t - 1)];
    if (static_cast<int>(m_t.size()) != code.n) {
      throw DomainError(
          "cluster_stabilizer_outcomes: teleport outcome row length != n");
    }
    BinaryRow row(checks.size(), 0);
    for (std::size_t c = 0; c < checks.size(); ++c) {
      int bit = s_t[c];
      if (t > 2) {
        bit ^= record.stabilizer_outcomes[static_cast<std::size_t>(t - 3)][c];
      }
      bit ^= mod2_dot(checks[c], m_t);
      row[c] = static_cast<std::uint8_t>(bit & 1);
    }
    corrected[static_cast<std::size_t>(t - 1)] = row;
  }
  return corrected;
}

}  // namespace telenoise
