#include "telenoise/chain.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace telenoise {

namespace {

void check_timestep(const ChainSpec& spec, int t) {
  if (t < 1 || t > spec.length()) {
    std::ostringstream msg;
    msg << "timestep " << t << " outside chain range [1, " << spec.length()
        << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace

const Ptm& ChainSpec::error_at(int t) const {
  if (t < 1 || t > length()) {
    throw DomainError("ChainSpec::error_at: timestep out of range");
  }
  return errors[static_cast<std::size_t>(t - 1)];
}

ChainSpec ChainSpec::repeated(const Ptm& e, int t_max) {
  if (t_max < 0) throw DomainError("ChainSpec::repeated: negative length");
  ChainSpec spec;
  spec.errors.assign(static_cast<std::size_t>(t_max), e);
  return spec;
}

ConditionalChannelState ConditionalChannelState::start() {
  ConditionalChannelState s;
  for (auto& w : s.weighted_) w.setZero();
  s.weighted_[PauliFrame::identity().index()] = Mat4::Identity();
  s.t_ = 0;
  return s;
}

std::vector<PauliFrame> ConditionalChannelState::support() const {
  if (t_ == 0) return {PauliFrame::identity()};
  return frame_marginal(t_).support;
}

const Mat4& ConditionalChannelState::weighted(const PauliFrame& f) const {
  return weighted_[f.index()];
}

Mat4 ConditionalChannelState::conditional(const PauliFrame& f) const {
  if (t_ == 0) return weighted_[f.index()];
  return weighted_[f.index()] / frame_marginal(t_).probability;
}

Mat4 ConditionalChannelState::average() const {
  Mat4 acc = Mat4::Zero();
  for (const auto& w : weighted_) acc += w;
  return acc;
}

ConditionalChannelState advance_conditional(const ConditionalChannelState& state,
                                            const Ptm& error_t) {
  ConditionalChannelState next;
  next.t_ = state.t_ + 1;
  for (auto& w : next.weighted_) w.setZero();
  for (const PauliFrame& f : frame_marginal(next.t_).support) {
    const Mat4 conj = conjugate(error_t, f).m;
    Mat4 acc = Mat4::Zero();
    for (const PauliFrame& g : f.predecessors()) {
      acc += state.weighted_[g.index()];
    }
    // each of the two (frame_{t-1}, m_t) histories carries probability 1/2
    next.weighted_[f.index()] = 0.5 * conj * acc;
  }
  return next;
}

Ptm exact_average_channel(const ChainSpec& spec, int t) {
  check_timestep(spec, t);
  ConditionalChannelState state = ConditionalChannelState::start();
  for (int s = 1; s <= t; ++s) {
    state = advance_conditional(state, spec.error_at(s));
  }
  return Ptm{state.average()};
}

std::vector<Ptm> exact_average_series(const ChainSpec& spec) {
  std::vector<Ptm> out;
  out.reserve(static_cast<std::size_t>(spec.length()));
  ConditionalChannelState state = ConditionalChannelState::start();
  for (int s = 1; s <= spec.length(); ++s) {
    state = advance_conditional(state, spec.error_at(s));
    out.push_back(Ptm{state.average()});
  }
  return out;
}

Mat4 delta_channel(const ChainSpec& spec, int t) {
  check_timestep(spec, t);
  ConditionalChannelState state = ConditionalChannelState::start();
  for (int s = 1; s <= t; ++s) {
    state = advance_conditional(state, spec.error_at(s));
  }
  // sign patterns from the case split; weights are already folded in
  Mat4 acc = Mat4::Zero();
  if (t == 1) {
    acc += state.weighted(PauliFrame{true, Pauli::I});
    acc -= state.weighted(PauliFrame{true, Pauli::Z});
  } else if (t % 2 == 0) {
    acc += state.weighted(PauliFrame{false, Pauli::I});
    acc -= state.weighted(PauliFrame{false, Pauli::X});
    acc -= state.weighted(PauliFrame{false, Pauli::Y});
    acc += state.weighted(PauliFrame{false, Pauli::Z});
  } else {
    acc += state.weighted(PauliFrame{true, Pauli::I});
    acc += state.weighted(PauliFrame{true, Pauli::X});
    acc -= state.weighted(PauliFrame{true, Pauli::Y});
    acc -= state.weighted(PauliFrame{true, Pauli::Z});
  }
  return acc;
}

namespace {

void enumerate_rec(const ChainSpec& spec, int t, int s, PauliFrame frame,
                   const Mat4& product, Mat4& acc) {
  if (s > t) {
    acc += product;
    return;
  }
  for (int m = 0; m < 2; ++m) {
    const PauliFrame next = frame.updated(m);
    const Mat4 step = conjugate(spec.error_at(s), next).m * product;
    enumerate_rec(spec, t, s + 1, next, step, acc);
  }
}

}  // namespace

Ptm enumerate_average_channel(const ChainSpec& spec, int t, int max_t) {
  check_timestep(spec, t);
  if (t > max_t) {
    std::ostringstream msg;
    msg << "enumerate_average_channel: t = " << t << " exceeds the 2^t cap ("
        << max_t << ")";
    throw ResourceLimitError(msg.str());
  }
  Mat4 acc = Mat4::Zero();
  enumerate_rec(spec, t, 1, PauliFrame::identity(), Mat4::Identity(), acc);
  return Ptm{acc / std::pow(2.0, t)};
}

namespace {

// Portable engine-to-bit mapping so that results are reproducible for a
// fixed seed independent of the standard library's distributions.
struct BitStream {
  std::mt19937_64 engine;
  std::uint64_t word = 0;
  int left = 0;

  explicit BitStream(std::uint64_t seed) : engine(seed) {}

  int next_bit() {
    if (left == 0) {
      word = engine();
      left = 64;
    }
    const int bit = static_cast<int>(word & 1u);
    word >>= 1;
    --left;
    return bit;
  }
};

std::uint64_t derive_chunk_seed(std::uint64_t base, std::uint64_t chunk) {
  // splitmix64 over (base, chunk)
  std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * (chunk + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::int64_t kChunkSamples = 65536;

}  // namespace

MonteCarloEstimate monte_carlo_average_channel(const ChainSpec& spec, int t,
                                               std::int64_t samples,
                                               std::uint64_t seed) {
  check_timestep(spec, t);
  if (samples < 1) {
    throw DomainError("monte_carlo_average_channel: samples must be >= 1");
  }

  // frame-conjugated error tables; only the support frames at each step are
  // ever visited but the full table keeps indexing trivial
  std::vector<std::array<Mat4, 8>> conj_tables(static_cast<std::size_t>(t));
  for (int s = 1; s <= t; ++s) {
    for (int f = 0; f < 8; ++f) {
      conj_tables[static_cast<std::size_t>(s - 1)][f] =
          conjugate(spec.error_at(s), PauliFrame::from_index(f)).m;
    }
  }

  Mat4 sum = Mat4::Zero();
  Mat4 sum_sq = Mat4::Zero();
  for (std::int64_t done = 0, chunk = 0; done < samples; ++chunk) {
    const std::int64_t n = std::min(kChunkSamples, samples - done);
    BitStream bits(derive_chunk_seed(seed, static_cast<std::uint64_t>(chunk)));
    Mat4 chunk_sum = Mat4::Zero();
    Mat4 chunk_sq = Mat4::Zero();
    for (std::int64_t i = 0; i < n; ++i) {
      PauliFrame frame = PauliFrame::identity();
      Mat4 product = Mat4::Identity();
      for (int s = 1; s <= t; ++s) {
        frame = frame.updated(bits.next_bit());
        product =
            conj_tables[static_cast<std::size_t>(s - 1)][frame.index()] *
            product;
      }
      chunk_sum += product;
      chunk_sq += product.cwiseProduct(product);
    }
    sum += chunk_sum;
    sum_sq += chunk_sq;
    done += n;
  }

  MonteCarloEstimate est;
  est.samples = samples;
  const double n = static_cast<double>(samples);
  est.mean = Ptm{sum / n};
  if (samples > 1) {
    const Mat4 var =
        (sum_sq / n - est.mean.m.cwiseProduct(est.mean.m)) * (n / (n - 1.0));
    est.std_error = (var / n).cwiseMax(0.0).cwiseSqrt();
  }
  return est;
}

Ptm free_accumulation_channel(const ChainSpec& spec, int t) {
  check_timestep(spec, t);
  Ptm acc = Ptm::identity();
  for (int s = 1; s <= t; ++s) {
    acc = compose(spec.error_at(s), acc);
  }
  return acc;
}

Ptm randomized_compiling_channel(const ChainSpec& spec, int t) {
  check_timestep(spec, t);
  Ptm acc = Ptm::identity();
  for (int s = 1; s <= t; ++s) {
    acc = compose(pauli_twirl(spec.error_at(s)), acc);
  }
  return acc;
}

}  // namespace telenoise
