#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "telenoise/pauli_frame.hpp"
#include "telenoise/ptm.hpp"

namespace telenoise {

/// Per-timestep error channels of a teleportation chain; errors[t-1] acts
/// right after the t-th teleportation.
struct ChainSpec {
  std::vector<Ptm> errors;

  int length() const { return static_cast<int>(errors.size()); }
  const Ptm& error_at(int t) const;  // 1-based
  static ChainSpec repeated(const Ptm& e, int t_max);
};

/// Frame-conditioned average channels at a fixed timestep. Stored
/// probability-weighted (Pr(frame) times the conditional channel) so that
/// the unconditional average is a plain sum; conditional() divides the
/// uniform weight back out.
class ConditionalChannelState {
 public:
  /// Pre-chain seed: all weight on the identity frame at t = 0.
  static ConditionalChannelState start();

  int timestep() const { return t_; }
  std::vector<PauliFrame> support() const;
  const Mat4& weighted(const PauliFrame& f) const;
  Mat4 conditional(const PauliFrame& f) const;
  Mat4 average() const;

  friend ConditionalChannelState advance_conditional(
      const ConditionalChannelState& state, const Ptm& error_t);

 private:
  std::array<Mat4, 8> weighted_{};
  int t_ = 0;
};

/// One step of the conditional-channel recursion: each frame at time t pulls
/// in its two equally likely predecessor frames at t-1 and conjugates the
/// new error by the frame at t.
ConditionalChannelState advance_conditional(const ConditionalChannelState& state,
                                            const Ptm& error_t);

/// Exact interaction-picture average error channel of the chain after t
/// teleportations (the final inverse-frame correction is already applied).
Ptm exact_average_channel(const ChainSpec& spec, int t);

/// Exact average channels for every t = 1..spec.length() in one sweep.
std::vector<Ptm> exact_average_series(const ChainSpec& spec);

/// Signed combination of conditional channels tracking the conditioning
/// bias: (1/2)(N|H - N|HZ) at t = 1, (1/4)(N|I - N|X - N|Y + N|Z) at even t,
/// (1/4)(N|H + N|HX - N|HY - N|HZ) at odd t > 1.
Mat4 delta_channel(const ChainSpec& spec, int t);

/// Brute-force oracle: average over all 2^t outcome strings of the
/// frame-conjugated error product.
Ptm enumerate_average_channel(const ChainSpec& spec, int t, int max_t = 20);

struct MonteCarloEstimate {
  Ptm mean;
  Mat4 std_error = Mat4::Zero();
  std::int64_t samples = 0;
};

/// Unbiased sample mean over uniformly drawn outcome strings. Samples are
/// processed in fixed-size chunks with chunk seeds derived from the base
/// seed, so the result does not depend on how chunks are scheduled.
MonteCarloEstimate monte_carlo_average_channel(const ChainSpec& spec, int t,
                                               std::int64_t samples,
                                               std::uint64_t seed);

/// Plain composition E_t ... E_1 with no teleportation.
Ptm free_accumulation_channel(const ChainSpec& spec, int t);

/// Composition of the in-place Pauli twirls of E_1 .. E_t (the
/// randomized-compiling comparison channel).
Ptm randomized_compiling_channel(const ChainSpec& spec, int t);

}  // namespace telenoise
