#include "telenoise/densesim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

namespace telenoise {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

// single-qubit operator embedded on qubit j (qubit 0 = least significant bit)
Eigen::MatrixXcd embed(const Mat2c& u, int qubit, int qubits) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < qubits; ++q) {
    const Eigen::MatrixXcd factor =
        (q == qubit) ? Eigen::MatrixXcd(u)
                     : Eigen::MatrixXcd(Mat2c::Identity());
    acc = kron(factor, acc);
  }
  return acc;
}

struct KahanAcc {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const Eigen::MatrixXcd& m,
                                         double tolerance) {
  int qubits = 0;
  while ((Eigen::Index{1} << qubits) < m.rows()) ++qubits;
  if ((Eigen::Index{1} << qubits) != m.rows() || m.rows() != m.cols()) {
    throw DimensionError("DensityMatrix: matrix must be square with 2^q rows");
  }
  if (qubits > kQubitCap) {
    throw ResourceLimitError("DensityMatrix: qubit count above cap");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
    throw NumericConsistencyError("DensityMatrix: not Hermitian");
  }
  const double tr = m.trace().real();
  if (tr <= 0.0 || tr > 1.0 + tolerance) {
    throw DomainError("DensityMatrix: trace must lie in (0, 1]");
  }
  return DensityMatrix{m, qubits};
}

Eigen::MatrixXcd codespace_projector(const CssCode& code) {
  const Eigen::Index dim = Eigen::Index{1} << code.n;
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& row : code.x_checks) {
    const Eigen::MatrixXcd s = PauliString::from_support(code.n, row, {}).dense();
    proj = 0.5 * (proj + s * proj);
  }
  for (const auto& row : code.z_checks) {
    const Eigen::MatrixXcd s = PauliString::from_support(code.n, {}, row).dense();
    proj = 0.5 * (proj + s * proj);
  }
  return proj;
}

Eigen::VectorXcd logical_basis_state(const CssCode& code, int bit) {
  if (code.k != 1) {
    throw DomainError("logical_basis_state: implemented for k = 1 codes");
  }
  const Eigen::MatrixXcd proj = codespace_projector(code);
  const Eigen::MatrixXcd zbar = logical_string(code, 0, Pauli::Z).dense();
  const double sign = (bit == 0) ? 1.0 : -1.0;
  const Eigen::MatrixXcd p = 0.5 * (proj + sign * zbar * proj);
  Eigen::Index best = 0;
  double best_norm = 0.0;
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    const double nrm = p.col(c).norm();
    if (nrm > best_norm) {
      best_norm = nrm;
      best = c;
    }
  }
  if (best_norm < 1e-12) {
    throw NumericConsistencyError("logical_basis_state: empty projector");
  }
  return p.col(best) / best_norm;
}

FoliationRun FoliationRun::coherent(const FoliationNoiseModel& model) {
  model.validate_locations();
  FoliationRun run;
  run.code = model.code;
  run.rounds = model.rounds;
  for (const auto& [loc, ch] : model.channels) {
    const auto key = std::make_pair(loc.gamma, loc.t);
    auto it = run.round_channels.find(key);
    if (it == run.round_channels.end()) {
      it = run.round_channels.emplace(key, Ptm::identity()).first;
    }
    // slots are iterated in ascending w, so later slots compose on the left
    it->second = compose(channel_ptm(ch), it->second);
  }
  return run;
}

FoliationRun FoliationRun::pauli(const CssCode& code, int rounds,
                                 const PauliReplacement& replacement) {
  FoliationRun run;
  run.code = code;
  run.rounds = rounds;
  for (const auto& [loc, entry] : replacement.probs) {
    // Replacement axes are labeled in the de-foliated frame, where the odd
    // rounds' Hadamards have been commuted away. The physical slot on a code
    // qubit at odd t sits after that round's Hadamard, so the inserted
    // channel is the H-conjugate of the labeled one (X flips become Z flips
    // and vice versa). Even rounds and ancillas carry no Hadamard offset.
    FlipAxis physical = entry.axis;
    if (loc.gamma <= code.n && loc.t % 2 == 1) {
      physical = (entry.axis == FlipAxis::X) ? FlipAxis::Z : FlipAxis::X;
    }
    const Ptm flip = (physical == FlipAxis::X)
                         ? Ptm::pauli_channel(entry.p, 0.0, 0.0)
                         : Ptm::pauli_channel(0.0, 0.0, entry.p);
    const auto key = std::make_pair(loc.gamma, loc.t);
    auto it = run.round_channels.find(key);
    if (it == run.round_channels.end()) {
      it = run.round_channels.emplace(key, Ptm::identity()).first;
    }
    it->second = compose(flip, it->second);
  }
  return run;
}

std::vector<CircuitOp> build_effective_circuit(const CssCode& code, int rounds,
                                               int qubit_cap) {
  if (rounds < 0) throw DomainError("build_effective_circuit: negative rounds");
  const bool any_checks = code.num_x_checks() + code.num_z_checks() > 0;
  const int needed = code.n + (any_checks ? 1 : 0);
  if (needed > qubit_cap) {
    std::ostringstream msg;
    msg << "build_effective_circuit: needs " << needed
        << " qubits, cap is " << qubit_cap;
    throw ResourceLimitError(msg.str());
  }

  std::vector<CircuitOp> ops;
  for (int t = 1; t <= 2 * rounds; ++t) {
    const bool odd = (t % 2 == 1);
    for (int i = 0; i < code.n; ++i) {
      ops.push_back({CircuitOp::Kind::teleport, i, i + 1, t, 0});
      ops.push_back({CircuitOp::Kind::code_noise, i, i + 1, t, 0});
    }
    const BinaryMatrix& checks = odd ? code.x_checks : code.z_checks;
    const int gamma_base = odd ? code.n : code.n + code.num_x_checks();
    for (int r = 0; r < static_cast<int>(checks.size()); ++r) {
      const int gamma = gamma_base + r + 1;
      ops.push_back({CircuitOp::Kind::ancilla_prep, 0, gamma, t, r});
      for (int j = 0; j < code.n; ++j) {
        if (checks[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]) {
          ops.push_back({CircuitOp::Kind::cz, j, gamma, t, r});
        }
      }
      ops.push_back({CircuitOp::Kind::ancilla_noise, 0, gamma, t, r});
      ops.push_back({CircuitOp::Kind::measure, 0, gamma, t, r});
    }
  }
  if (rounds > 0) {
    for (int i = 0; i < code.n; ++i) {
      ops.push_back({CircuitOp::Kind::frame_inverse, i, i + 1, 2 * rounds, 0});
    }
  }
  return ops;
}

namespace {

struct ExtractionRow {
  std::size_t row = 0;
  double base_sign = 1.0;
  std::uint32_t x_mask = 0;
  std::uint32_t z_mask = 0;
};

struct GroupAcc {
  KahanAcc prob;
  std::vector<std::array<std::array<KahanAcc, 4>, 4>> ptm;  // [logical][P][P']
};

struct WalkState {
  std::uint32_t frame_x = 0;   // per-qubit X power of the accumulated frame
  std::uint32_t frame_z = 0;   // per-qubit Z power
  std::uint32_t m_round = 0;   // teleport outcomes of the current round
  int m_round_t = 0;
  std::uint32_t last_sx = 0;   // raw outcomes two rounds back, per check row
  std::uint32_t last_sz = 0;
  std::uint64_t key_corr = 0;
  std::uint64_t key_raw = 0;
  int bits_done = 0;
};

class FoliationEngine {
 public:
  explicit FoliationEngine(const FoliationRun& run)
      : run_(&run), code_(&run.code), n_(run.code.n), anc_(run.code.n) {
    const bool any_checks =
        code_->num_x_checks() + code_->num_z_checks() > 0;
    qubits_ = n_ + (any_checks ? 1 : 0);
    if (qubits_ > kQubitCap) {
      throw ResourceLimitError("foliation run: qubit budget exceeded");
    }
    ops_ = build_effective_circuit(*code_, run.rounds);
    k_ = code_->k;

    for (const auto& row : code_->x_checks) x_masks_.push_back(mask_of(row));
    for (const auto& row : code_->z_checks) z_masks_.push_back(mask_of(row));

    syndrome_bits_ =
        run.rounds * (code_->num_x_checks() + code_->num_z_checks());
    if (syndrome_bits_ > 62) {
      throw ResourceLimitError("foliation run: too many syndrome bits");
    }
    outcome_bits_ = 2 * run.rounds * n_ + syndrome_bits_;

    for (const auto& [key, ptm] : run.round_channels) {
      channel_terms_.emplace(key, ChannelTerms::compile(ptm.m));
    }

    // the final measurement can be folded into leaf extraction when only
    // frame corrections (handled as extraction signs) follow it
    last_measure_pos_ = ops_.size();
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (ops_[i].kind == CircuitOp::Kind::measure) last_measure_pos_ = i;
    }
    collapse_final_ = last_measure_pos_ != ops_.size();
    for (std::size_t i = last_measure_pos_ + 1;
         collapse_final_ && i < ops_.size(); ++i) {
      if (ops_[i].kind != CircuitOp::Kind::frame_inverse) {
        collapse_final_ = false;
      }
    }

    build_extraction_rows();
  }

  int outcome_bits() const { return outcome_bits_; }

  void run_enumeration() {
    check_enumeration_cap();
    prepare_buffers(outcome_bits_ + 1);
    init_input(buffers_[0]);
    WalkState st;
    dfs(0, 0, st);
  }

  void run_sampling(std::int64_t samples, std::uint64_t seed) {
    if (samples < 1) {
      throw DomainError("foliation run: sample count must be >= 1");
    }
    prepare_buffers(2);
    std::mt19937_64 engine(seed);
    const double inv_n = 1.0 / static_cast<double>(samples);
    for (std::int64_t s = 0; s < samples; ++s) {
      sample_once(engine, inv_n);
    }
  }

  ConditionalResult run_record(const SyndromeRecord& record) {
    validate_record(record);
    prepare_buffers(2);
    PauliOperatorBlock& cur = buffers_[0];
    PauliOperatorBlock& scratch = buffers_[1];
    init_input(cur);
    WalkState st;
    for (const CircuitOp& op : ops_) {
      switch (op.kind) {
        case CircuitOp::Kind::teleport: {
          begin_round(st, op.t);
          const int m = record.teleport_outcomes[static_cast<std::size_t>(
              op.t - 1)][static_cast<std::size_t>(op.qubit)];
          PauliOperatorBlock::teleport_into(cur, scratch, op.qubit, m);
          std::swap(cur, scratch);
          note_teleport(st, op, m);
          break;
        }
        case CircuitOp::Kind::measure: {
          const int s = record.stabilizer_outcomes[static_cast<std::size_t>(
              op.t - 1)][static_cast<std::size_t>(op.check_row)];
          PauliOperatorBlock::measure_reset_into(cur, scratch, anc_, s);
          std::swap(cur, scratch);
          note_measure(st, op, s);
          break;
        }
        default:
          apply_plain(cur, op);
          break;
      }
    }
    ConditionalResult result;
    result.probability = probability_of(cur);
    result.logical_ptms.assign(static_cast<std::size_t>(k_), Mat4::Zero());
    result.ptm_defined = result.probability > 0.0;
    if (result.ptm_defined) {
      for (int l = 0; l < k_; ++l) {
        result.logical_ptms[static_cast<std::size_t>(l)] =
            extract_ptm(cur, st, l) / result.probability;
      }
    }
    return result;
  }

  LogicalChannelReport report(bool corrected) const {
    const auto& groups = corrected ? corrected_groups_ : raw_groups_;
    LogicalChannelReport out;
    for (const auto& [key, acc] : groups) {
      LogicalGroup g;
      g.syndrome = unpack_key(key);
      g.probability = acc.prob.sum;
      g.ptm_defined = g.probability > 0.0;
      g.logical_ptms.assign(static_cast<std::size_t>(k_), Mat4::Zero());
      if (g.ptm_defined) {
        for (int l = 0; l < k_; ++l) {
          Mat4& m = g.logical_ptms[static_cast<std::size_t>(l)];
          for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
              m(r, c) = acc.ptm[static_cast<std::size_t>(l)]
                            [static_cast<std::size_t>(r)]
                            [static_cast<std::size_t>(c)]
                                .sum /
                        g.probability;
            }
          }
        }
      }
      out.groups.push_back(std::move(g));
    }
    std::sort(out.groups.begin(), out.groups.end(),
              [](const LogicalGroup& a, const LogicalGroup& b) {
                return a.syndrome < b.syndrome;
              });
    return out;
  }

 private:
  static std::uint32_t mask_of(const BinaryRow& row) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i]) m |= 1u << i;
    }
    return m;
  }

  void check_enumeration_cap() const {
    if (outcome_bits_ >= 63 ||
        (std::int64_t{1} << outcome_bits_) > run_->enumeration_cap) {
      std::ostringstream msg;
      msg << "foliation run: 2^" << outcome_bits_
          << " outcome strings exceed the enumeration cap "
          << run_->enumeration_cap << "; use the sampling policy";
      throw ResourceLimitError(msg.str());
    }
  }

  void prepare_buffers(int depth) {
    buffers_.assign(static_cast<std::size_t>(depth),
                    PauliOperatorBlock(qubits_, 4 * k_));
  }

  void build_extraction_rows() {
    extraction_.resize(static_cast<std::size_t>(k_));
    for (int l = 0; l < k_; ++l) {
      for (int p = 0; p < 4; ++p) {
        const PauliString s = logical_string(*code_, l, static_cast<Pauli>(p));
        ExtractionRow row;
        row.x_mask = s.x;
        row.z_mask = s.z;
        row.base_sign = s.sign();
        // embedding keeps the ancilla factor at identity
        PauliOperatorBlock probe(qubits_, 1);
        PauliString embedded = PauliString::identity(qubits_);
        embedded.x = s.x;
        embedded.z = s.z;
        row.row = probe.row_of(embedded);
        extraction_[static_cast<std::size_t>(l)][static_cast<std::size_t>(p)] =
            row;
      }
    }
  }

  // Tomography inputs: column 4l + p carries logical_P(l) times the
  // codespace projector (others maximally mixed), expanded over the
  // stabilizer group. The shared ancilla starts in |+>.
  void init_input(PauliOperatorBlock& block) {
    block.set_zero();
    const std::vector<PauliString> group = stabilizer_group(*code_);
    const int generators = code_->num_x_checks() + code_->num_z_checks();
    // A = logical_P . (codespace projector) / 2^(k-1); each of the 2^g
    // subset products contributes Tr[R^2] / 2^(g+k-1) = 2^(n-g-k+1).
    const double coeff = std::pow(2.0, n_ - generators - k_ + 1);
    for (int l = 0; l < k_; ++l) {
      for (int p = 0; p < 4; ++p) {
        const int col = 4 * l + p;
        const PauliString lp = logical_string(*code_, l, static_cast<Pauli>(p));
        for (const PauliString& s : group) {
          const PauliString term = lp * s;
          PauliString embedded = PauliString::identity(qubits_);
          embedded.x = term.x;
          embedded.z = term.z;
          block.coeff(block.row_of(embedded), col) += coeff * term.sign();
        }
      }
    }
    if (qubits_ > n_) block.reset_to_plus(anc_);
  }

  void begin_round(WalkState& st, int t) const {
    if (st.m_round_t != t) {
      st.m_round = 0;
      st.m_round_t = t;
    }
  }

  void note_teleport(WalkState& st, const CircuitOp& op, int m) const {
    if (m != 0) {
      st.m_round ^= 1u << op.qubit;
      if (op.t % 2 == 0) {
        st.frame_x ^= 1u << op.qubit;
      } else {
        st.frame_z ^= 1u << op.qubit;
      }
    }
  }

  void note_measure(WalkState& st, const CircuitOp& op, int s) const {
    const bool odd = (op.t % 2 == 1);
    const std::uint32_t mask =
        odd ? x_masks_[static_cast<std::size_t>(op.check_row)]
            : z_masks_[static_cast<std::size_t>(op.check_row)];
    const int u = std::popcount(st.m_round & mask) & 1;
    std::uint32_t& last = odd ? st.last_sx : st.last_sz;
    const int prev = static_cast<int>((last >> op.check_row) & 1u);
    const int corrected = s ^ prev ^ u;
    if (s != 0) {
      last |= 1u << op.check_row;
    } else {
      last &= ~(1u << op.check_row);
    }
    st.key_corr |= static_cast<std::uint64_t>(corrected) << st.bits_done;
    st.key_raw |= static_cast<std::uint64_t>(s) << st.bits_done;
    ++st.bits_done;
  }

  void apply_plain(PauliOperatorBlock& block, const CircuitOp& op) const {
    switch (op.kind) {
      case CircuitOp::Kind::code_noise:
      case CircuitOp::Kind::ancilla_noise: {
        const auto it = channel_terms_.find({op.gamma, op.t});
        if (it != channel_terms_.end()) {
          const int qubit =
              (op.kind == CircuitOp::Kind::code_noise) ? op.qubit : anc_;
          block.apply_channel(qubit, it->second);
        }
        break;
      }
      case CircuitOp::Kind::ancilla_prep:
        // measurements re-prepare the shared ancilla in the same pass, and
        // the input block already starts it in |+>
        break;
      case CircuitOp::Kind::cz:
        block.apply_cz(op.qubit, anc_);
        break;
      case CircuitOp::Kind::frame_inverse:
        // handled by commutation signs at extraction time
        break;
      default:
        throw Error("apply_plain: branching op in plain path");
    }
  }

  double probability_of(const PauliOperatorBlock& block) const {
    return block.coeff(0, 0) / 2.0;
  }

  std::size_t x_anc_row() const { return std::size_t{1} << (2 * anc_); }

  Mat4 extract_ptm(const PauliOperatorBlock& block, const WalkState& st,
                   int l) const {
    Mat4 out;
    for (int p = 0; p < 4; ++p) {
      const ExtractionRow& row =
          extraction_[static_cast<std::size_t>(l)][static_cast<std::size_t>(p)];
      const int frame_parity =
          (std::popcount(st.frame_x & row.z_mask) +
           std::popcount(st.frame_z & row.x_mask)) &
          1;
      const double sign = row.base_sign * (frame_parity ? -1.0 : 1.0);
      for (int c = 0; c < 4; ++c) {
        out(p, c) = 0.5 * sign * block.coeff(row.row, 4 * l + c);
      }
    }
    return out;
  }

  void accumulate_leaf(const PauliOperatorBlock& block, const WalkState& st) {
    accumulate_into(corrected_groups_[st.key_corr], block, st, 1.0);
    accumulate_into(raw_groups_[st.key_raw], block, st, 1.0);
  }

  void accumulate_into(GroupAcc& acc, const PauliOperatorBlock& block,
                       const WalkState& st, double weight) {
    if (acc.ptm.empty()) {
      acc.ptm.resize(static_cast<std::size_t>(k_));
    }
    acc.prob.add(weight * probability_of(block));
    for (int l = 0; l < k_; ++l) {
      const Mat4 m = extract_ptm(block, st, l);
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          acc.ptm[static_cast<std::size_t>(l)][static_cast<std::size_t>(r)]
                 [static_cast<std::size_t>(c)]
                     .add(weight * m(r, c));
        }
      }
    }
  }

  // Leaf contributions of both outcomes of the final measurement, read off
  // the pre-measurement block: conditioning on s keeps
  // (c(R ox I) + (-1)^s c(R ox X)) / 2 for extraction rows R.
  void accumulate_collapsed(const PauliOperatorBlock& block,
                            const WalkState& st, const CircuitOp& op) {
    const std::size_t x_off = x_anc_row();
    for (int s = 0; s < 2; ++s) {
      WalkState child = st;
      note_measure(child, op, s);
      const double a = (s == 0) ? 1.0 : -1.0;
      for (auto* groups : {&corrected_groups_, &raw_groups_}) {
        GroupAcc& acc =
            (*groups)[groups == &corrected_groups_ ? child.key_corr
                                                   : child.key_raw];
        if (acc.ptm.empty()) acc.ptm.resize(static_cast<std::size_t>(k_));
        acc.prob.add(0.25 * (block.coeff(0, 0) + a * block.coeff(x_off, 0)));
        for (int l = 0; l < k_; ++l) {
          for (int p = 0; p < 4; ++p) {
            const ExtractionRow& row =
                extraction_[static_cast<std::size_t>(l)]
                           [static_cast<std::size_t>(p)];
            const int frame_parity =
                (std::popcount(child.frame_x & row.z_mask) +
                 std::popcount(child.frame_z & row.x_mask)) &
                1;
            const double sign = row.base_sign * (frame_parity ? -1.0 : 1.0);
            for (int c = 0; c < 4; ++c) {
              const double v = block.coeff(row.row, 4 * l + c) +
                               a * block.coeff(row.row + x_off, 4 * l + c);
              acc.ptm[static_cast<std::size_t>(l)][static_cast<std::size_t>(p)]
                     [static_cast<std::size_t>(c)]
                         .add(0.25 * sign * v);
            }
          }
        }
      }
    }
  }

  void dfs(std::size_t pos, int depth, WalkState st) {
    PauliOperatorBlock& cur = buffers_[static_cast<std::size_t>(depth)];
    while (pos < ops_.size()) {
      const CircuitOp& op = ops_[pos];
      if (op.kind == CircuitOp::Kind::teleport) {
        begin_round(st, op.t);
        for (int m = 0; m < 2; ++m) {
          PauliOperatorBlock::teleport_into(
              cur, buffers_[static_cast<std::size_t>(depth + 1)], op.qubit, m);
          WalkState child = st;
          note_teleport(child, op, m);
          dfs(pos + 1, depth + 1, child);
        }
        return;
      }
      if (op.kind == CircuitOp::Kind::measure) {
        if (collapse_final_ && pos == last_measure_pos_) {
          accumulate_collapsed(cur, st, op);
          return;
        }
        for (int s = 0; s < 2; ++s) {
          PauliOperatorBlock::measure_reset_into(
              cur, buffers_[static_cast<std::size_t>(depth + 1)], anc_, s);
          WalkState child = st;
          note_measure(child, op, s);
          dfs(pos + 1, depth + 1, child);
        }
        return;
      }
      apply_plain(cur, op);
      ++pos;
    }
    accumulate_leaf(cur, st);
  }

  void sample_once(std::mt19937_64& engine, double inv_n) {
    PauliOperatorBlock& cur = buffers_[0];
    PauliOperatorBlock& scratch = buffers_[1];
    init_input(cur);
    WalkState st;
    double path_prob = 1.0;
    const std::size_t x_anc_row = std::size_t{1} << (2 * anc_);
    for (const CircuitOp& op : ops_) {
      switch (op.kind) {
        case CircuitOp::Kind::teleport: {
          begin_round(st, op.t);
          const int m = static_cast<int>(engine() & 1u);
          PauliOperatorBlock::teleport_into(cur, scratch, op.qubit, m);
          std::swap(cur, scratch);
          note_teleport(st, op, m);
          path_prob *= 0.5;
          break;
        }
        case CircuitOp::Kind::measure: {
          const double c_i = cur.coeff(0, 0);
          const double c_x = cur.coeff(x_anc_row, 0);
          double p0 = (c_i > 0.0) ? 0.5 * (c_i + c_x) / c_i : 0.5;
          p0 = std::clamp(p0, 0.0, 1.0);
          const double u =
              static_cast<double>(engine() >> 11) * 0x1.0p-53;
          const int s = (u < p0) ? 0 : 1;
          PauliOperatorBlock::measure_reset_into(cur, scratch, anc_, s);
          std::swap(cur, scratch);
          note_measure(st, op, s);
          path_prob *= (s == 0) ? p0 : (1.0 - p0);
          break;
        }
        default:
          apply_plain(cur, op);
          break;
      }
    }
    if (path_prob > 0.0) {
      const double weight = inv_n / path_prob;
      accumulate_into(corrected_groups_[st.key_corr], cur, st, weight);
      accumulate_into(raw_groups_[st.key_raw], cur, st, weight);
    }
  }

  void validate_record(const SyndromeRecord& record) const {
    if (static_cast<int>(record.stabilizer_outcomes.size()) !=
            2 * run_->rounds ||
        static_cast<int>(record.teleport_outcomes.size()) != 2 * run_->rounds) {
      throw DomainError("run_conditional: record does not cover 2L rounds");
    }
    for (int t = 1; t <= 2 * run_->rounds; ++t) {
      const bool odd = (t % 2 == 1);
      const std::size_t want =
          odd ? code_->x_checks.size() : code_->z_checks.size();
      if (record.stabilizer_outcomes[static_cast<std::size_t>(t - 1)].size() !=
          want) {
        throw DomainError("run_conditional: stabilizer outcome shape mismatch");
      }
      if (static_cast<int>(
              record.teleport_outcomes[static_cast<std::size_t>(t - 1)]
                  .size()) != n_) {
        throw DomainError("run_conditional: teleport outcome shape mismatch");
      }
    }
  }

  std::vector<std::uint8_t> unpack_key(std::uint64_t key) const {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(syndrome_bits_));
    for (int i = 0; i < syndrome_bits_; ++i) {
      bits[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>((key >> i) & 1u);
    }
    return bits;
  }

  const FoliationRun* run_;
  const CssCode* code_;
  int n_, anc_, qubits_ = 0, k_ = 1;
  int syndrome_bits_ = 0, outcome_bits_ = 0;
  std::vector<CircuitOp> ops_;
  std::vector<std::uint32_t> x_masks_, z_masks_;
  std::vector<std::array<ExtractionRow, 4>> extraction_;
  std::vector<PauliOperatorBlock> buffers_;
  std::map<std::uint64_t, GroupAcc> corrected_groups_;
  std::map<std::uint64_t, GroupAcc> raw_groups_;
};

struct EngineReports {
  LogicalChannelReport corrected;
  LogicalChannelReport raw;
};

EngineReports run_reports(const FoliationRun& run) {
  FoliationEngine engine(run);
  switch (run.policy) {
    case OutcomePolicy::enumerate_all:
      engine.run_enumeration();
      break;
    case OutcomePolicy::sample:
      engine.run_sampling(run.samples, run.seed);
      break;
    case OutcomePolicy::fixed_record:
      throw DomainError(
          "averaged_logical_report: fixed_record policy runs through "
          "run_conditional");
  }
  return EngineReports{engine.report(true), engine.report(false)};
}

}  // namespace

double LogicalChannelReport::total_probability() const {
  double acc = 0.0;
  for (const LogicalGroup& g : groups) acc += g.probability;
  return acc;
}

ConditionalResult run_conditional(const FoliationRun& run,
                                  const SyndromeRecord& record) {
  FoliationEngine engine(run);
  return engine.run_record(record);
}

LogicalChannelReport averaged_logical_report(const FoliationRun& run) {
  return run_reports(run).corrected;
}

namespace {

void compare_reports(const LogicalChannelReport& a,
                     const LogicalChannelReport& b, double& max_prob,
                     double& max_ptm, std::vector<Theorem2Group>* groups) {
  if (a.groups.size() != b.groups.size()) {
    throw NumericConsistencyError(
        "verify_theorem2: reports enumerate different syndrome groups");
  }
  for (std::size_t i = 0; i < a.groups.size(); ++i) {
    const LogicalGroup& ga = a.groups[i];
    const LogicalGroup& gb = b.groups[i];
    if (ga.syndrome != gb.syndrome) {
      throw NumericConsistencyError(
          "verify_theorem2: syndrome group mismatch");
    }
    Theorem2Group delta;
    delta.syndrome = ga.syndrome;
    delta.prob_coherent = ga.probability;
    delta.prob_pauli = gb.probability;
    max_prob = std::max(max_prob, std::abs(ga.probability - gb.probability));
    if (ga.ptm_defined && gb.ptm_defined) {
      for (std::size_t l = 0; l < ga.logical_ptms.size(); ++l) {
        delta.max_ptm_delta = std::max(
            delta.max_ptm_delta,
            (ga.logical_ptms[l] - gb.logical_ptms[l]).cwiseAbs().maxCoeff());
      }
      max_ptm = std::max(max_ptm, delta.max_ptm_delta);
    }
    if (groups) groups->push_back(std::move(delta));
  }
}

}  // namespace

Theorem2Report verify_theorem2(const FoliationNoiseModel& model,
                               const ConvertOptions& opts) {
  const PauliReplacement replacement = convert_noise_model(model, opts);
  const FoliationRun coherent = FoliationRun::coherent(model);
  const FoliationRun pauli =
      FoliationRun::pauli(model.code, model.rounds, replacement);

  const EngineReports rep_c = run_reports(coherent);
  const EngineReports rep_p = run_reports(pauli);

  Theorem2Report out;
  compare_reports(rep_c.corrected, rep_p.corrected, out.max_prob_deviation,
                  out.max_ptm_deviation, &out.groups);
  compare_reports(rep_c.raw, rep_p.raw, out.raw_max_prob_deviation,
                  out.raw_max_ptm_deviation, nullptr);
  return out;
}

bool stabilizer_eigenstate_check(const CssCode& code, const Ptm& error,
                                 int qubit, const DensityMatrix& state,
                                 double tolerance) {
  if (state.qubits != code.n) {
    throw DimensionError("stabilizer_eigenstate_check: state size mismatch");
  }
  PauliOperatorBlock block = PauliOperatorBlock::from_dense(state.mat);
  block.apply_channel(qubit, error.m);
  const Eigen::MatrixXcd post = block.to_dense(0);

  // syndrome sector projectors over all generator sign patterns
  std::vector<PauliString> generators;
  for (const auto& row : code.x_checks) {
    generators.push_back(PauliString::from_support(code.n, row, {}));
  }
  for (const auto& row : code.z_checks) {
    generators.push_back(PauliString::from_support(code.n, {}, row));
  }
  const int g = static_cast<int>(generators.size());
  const Eigen::Index dim = Eigen::Index{1} << code.n;
  std::vector<Eigen::MatrixXcd> projectors;
  for (int sector = 0; sector < (1 << g); ++sector) {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(dim, dim);
    for (int j = 0; j < g; ++j) {
      const double sign = ((sector >> j) & 1) ? -1.0 : 1.0;
      proj = 0.5 * (proj + sign * generators[static_cast<std::size_t>(j)]
                                      .dense() *
                               proj);
    }
    projectors.push_back(std::move(proj));
  }
  for (std::size_t a = 0; a < projectors.size(); ++a) {
    for (std::size_t b = 0; b < projectors.size(); ++b) {
      if (a == b) continue;
      const double cross =
          (projectors[a] * post * projectors[b]).cwiseAbs().maxCoeff();
      if (cross > tolerance) return false;
    }
  }
  return true;
}

std::array<NoisyMeasurementBranch, 2> noisy_z_stabilizer_measurement(
    const DensityMatrix& state, const BinaryRow& support,
    const PureZKraus& ancilla_error) {
  const int n = state.qubits;
  if (static_cast<int>(support.size()) != n) {
    throw DimensionError("noisy_z_stabilizer_measurement: support length");
  }
  if (n + 1 > kQubitCap) {
    throw ResourceLimitError("noisy_z_stabilizer_measurement: qubit cap");
  }
  const int q = n + 1;
  const Eigen::Index dim = Eigen::Index{1} << q;

  Mat2c plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  Eigen::MatrixXcd rho = kron(plus, state.mat);  // ancilla is qubit n

  Eigen::MatrixXcd cz_all = Eigen::MatrixXcd::Identity(dim, dim);
  for (int j = 0; j < n; ++j) {
    if (!support[static_cast<std::size_t>(j)]) continue;
    Eigen::MatrixXcd cz = Eigen::MatrixXcd::Identity(dim, dim);
    const Eigen::MatrixXcd zj =
        PauliString::single(q, j, Pauli::Z).dense();
    const Eigen::MatrixXcd za =
        PauliString::single(q, n, Pauli::Z).dense();
    cz = 0.5 * (Eigen::MatrixXcd::Identity(dim, dim) + zj + za - zj * za);
    cz_all = cz * cz_all;
  }
  rho = cz_all * rho * cz_all.adjoint();

  const Eigen::MatrixXcd noise = embed(ancilla_error.matrix(), n, q);
  rho = noise * rho * noise.adjoint();

  std::array<NoisyMeasurementBranch, 2> out;
  const Eigen::MatrixXcd xa = PauliString::single(q, n, Pauli::X).dense();
  for (int s = 0; s < 2; ++s) {
    const double sign = (s == 0) ? 1.0 : -1.0;
    const Eigen::MatrixXcd proj =
        0.5 * (Eigen::MatrixXcd::Identity(dim, dim) + sign * xa);
    Eigen::MatrixXcd branch = proj * rho * proj;
    // trace out the ancilla (most significant qubit)
    const Eigen::Index half = dim / 2;
    Eigen::MatrixXcd reduced =
        branch.topLeftCorner(half, half) + branch.bottomRightCorner(half, half);
    const double p = reduced.trace().real();
    out[static_cast<std::size_t>(s)].probability = p;
    if (p > 1e-300) {
      out[static_cast<std::size_t>(s)].post =
          DensityMatrix{reduced / p, n};
    } else {
      out[static_cast<std::size_t>(s)].post = DensityMatrix{reduced, n};
    }
  }
  return out;
}

}  // namespace telenoise
