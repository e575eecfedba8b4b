#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "latgauss/rng.hpp"

namespace latgauss::mcmc {

/// How the first chain state is produced.
///  - stationary: every coordinate drawn exactly from the discrete
///    Gaussian marginal (inverse CDF), so the chain starts in its
///    typical set and post-burn-in statistics are transient-free.
///  - origin: the all-zeros vector (the mode of the target). The chain
///    then needs several thousand steps at large N to climb to the
///    typical set; useful for studying the transient itself.
enum class InitPolicy { stationary, origin };

inline constexpr int kDefaultBlockSize = 6;
inline constexpr long long kDefaultSteps = 10000;

/// Target: pi(x) proportional to exp(-|x|^2 / (2 sigma^2)) on Z^N.
struct GaussianConfig {
  int n = 0;
  double sigma = 0.0;
  double proposal_sigma = 0.0;  // 0 resolves to sigma
  long long steps = kDefaultSteps;
  long long burn_in = -1;  // negative resolves to steps / 5
  std::uint64_t seed = 0;
  int block_size = kDefaultBlockSize;  // coordinates perturbed per step
  InitPolicy init = InitPolicy::stationary;

  GaussianConfig normalized() const {
    GaussianConfig c = *this;
    if (c.proposal_sigma <= 0.0) c.proposal_sigma = c.sigma;
    if (c.burn_in < 0) c.burn_in = c.steps / 5;
    if (c.block_size > c.n) c.block_size = c.n;
    return c;
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("dimension N must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (steps < 0) throw std::invalid_argument("steps must be non-negative");
    GaussianConfig c = normalized();
    if (!(c.proposal_sigma > 0.0))
      throw std::invalid_argument("proposal sigma must be positive");
    if (steps > 0 && c.burn_in >= steps)
      throw std::invalid_argument("burn-in must be smaller than steps");
    if (steps == 0 && c.burn_in != 0)
      throw std::invalid_argument("burn-in must be 0 when steps is 0");
    if (c.block_size < 1)
      throw std::invalid_argument("block size must be >= 1");
  }
};

struct ChainState {
  std::vector<long long> position;
  long long step_index = 0;
  long long accepted_count = 0;
  Rng rng;

  explicit ChainState(std::uint64_t seed) : rng(seed) {}
};

/// Per-step record of one chain run.
struct NormTrace {
  std::vector<double> norms;
  std::vector<std::uint8_t> accepted;
  GaussianConfig config;  // normalized echo
  long long burn_in = 0;
};

struct ChainResult {
  std::vector<long long> final_position;
  NormTrace trace;
};

namespace detail {

inline long long round_ties_even(double v) {
  // llrint honours the current FP rounding mode, which is
  // round-to-nearest-even unless someone changed it process-wide.
  return std::llrint(v);
}

struct CoordinateDelta {
  int index;
  long long delta;
};

// Floyd's algorithm: k distinct indices from [0, n), then sorted so the
// Gaussian stream maps onto coordinates deterministically.
inline void draw_indices(Rng& rng, int n, int k, std::vector<int>& out) {
  out.clear();
  if (k >= n) {
    for (int i = 0; i < n; ++i) out.push_back(i);
    return;
  }
  for (int j = n - k; j < n; ++j) {
    int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    if (std::find(out.begin(), out.end(), t) != out.end())
      out.push_back(j);
    else
      out.push_back(t);
  }
  std::sort(out.begin(), out.end());
}

inline void draw_proposal(Rng& rng, int n, int block_size,
                          double proposal_sigma,
                          std::vector<CoordinateDelta>& out) {
  static thread_local std::vector<int> idx;
  draw_indices(rng, n, std::min(block_size, n), idx);
  out.clear();
  for (int i : idx)
    out.push_back({i, round_ties_even(rng.gaussian(proposal_sigma))});
}

inline __int128 squared_norm(const std::vector<long long>& v) {
  __int128 s = 0;
  for (long long c : v) s += static_cast<__int128>(c) * c;
  return s;
}

}  // namespace detail

inline ChainState init_chain_state(const GaussianConfig& config) {
  config.validate();
  const GaussianConfig c = config.normalized();
  ChainState state(c.seed);
  state.position.assign(static_cast<std::size_t>(c.n), 0);
  if (c.init == InitPolicy::stationary) {
    DiscreteGaussianTable table(c.sigma);
    for (auto& x : state.position) x = table.sample(state.rng);
  }
  return state;
}

/// One candidate position: block_size coordinates of the current
/// position receive independent rounded N(0, proposal_sigma) offsets.
/// Consumes the state's RNG deterministically.
inline std::vector<long long> propose(ChainState& state, double proposal_sigma,
                                      int block_size = kDefaultBlockSize) {
  std::vector<detail::CoordinateDelta> deltas;
  detail::draw_proposal(state.rng, static_cast<int>(state.position.size()),
                        block_size, proposal_sigma, deltas);
  std::vector<long long> candidate = state.position;
  for (const auto& d : deltas)
    candidate[static_cast<std::size_t>(d.index)] += d.delta;
  return candidate;
}

/// min{1, exp((|x|^2 - |y|^2) / (2 sigma^2))}. Squared norms are exact
/// integer sums; only the exponent is floating point.
inline double acceptance_probability(const std::vector<long long>& x,
                                     const std::vector<long long>& y,
                                     double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const __int128 sx = detail::squared_norm(x);
  const __int128 sy = detail::squared_norm(y);
  if (sy <= sx) return 1.0;
  const double diff = static_cast<double>(sx - sy);
  return std::exp(diff / (2.0 * sigma * sigma));
}

namespace detail {

// In-place transition; returns the step's norm and accept flag.
// Equivalent to propose() + acceptance_probability() + uniform draw,
// with the same RNG consumption, but without copying the position.
inline std::pair<double, bool> step_in_place(ChainState& state,
                                             const GaussianConfig& cfg,
                                             __int128& sq_norm) {
  static thread_local std::vector<CoordinateDelta> deltas;
  draw_proposal(state.rng, cfg.n, cfg.block_size, cfg.proposal_sigma, deltas);
  __int128 dsq = 0;
  for (const auto& d : deltas) {
    const long long old_c = state.position[static_cast<std::size_t>(d.index)];
    const long long new_c = old_c + d.delta;
    dsq += static_cast<__int128>(new_c) * new_c -
           static_cast<__int128>(old_c) * old_c;
  }
  double alpha = 1.0;
  if (dsq > 0)
    alpha = std::exp(-static_cast<double>(dsq) / (2.0 * cfg.sigma * cfg.sigma));
  const bool accept = state.rng.uniform01() < alpha;
  if (accept) {
    for (const auto& d : deltas)
      state.position[static_cast<std::size_t>(d.index)] += d.delta;
    sq_norm += dsq;
    ++state.accepted_count;
  }
  ++state.step_index;
  return {std::sqrt(static_cast<double>(sq_norm)), accept};
}

}  // namespace detail

/// One Metropolis transition. Position is unchanged on rejection.
inline ChainState step(const ChainState& state, const GaussianConfig& config) {
  config.validate();
  const GaussianConfig cfg = config.normalized();
  if (static_cast<int>(state.position.size()) != cfg.n)
    throw std::invalid_argument("state dimension does not match config");
  ChainState next = state;
  __int128 sq = detail::squared_norm(next.position);
  detail::step_in_place(next, cfg, sq);
  return next;
}

/// Full chain run: `steps` transitions from the configured initial
/// state, recording the l2 norm and accept flag of every step.
inline ChainResult run_chain(const GaussianConfig& config) {
  config.validate();
  const GaussianConfig cfg = config.normalized();
  ChainState state = init_chain_state(cfg);
  ChainResult result;
  result.trace.config = cfg;
  result.trace.burn_in = cfg.burn_in;
  result.trace.norms.reserve(static_cast<std::size_t>(cfg.steps));
  result.trace.accepted.reserve(static_cast<std::size_t>(cfg.steps));
  __int128 sq = detail::squared_norm(state.position);
  for (long long t = 0; t < cfg.steps; ++t) {
    auto [norm, accepted] = detail::step_in_place(state, cfg, sq);
    result.trace.norms.push_back(norm);
    result.trace.accepted.push_back(accepted ? 1 : 0);
  }
  result.final_position = std::move(state.position);
  return result;
}

/// Short-chain draw from the discrete Gaussian on Z^N, used for NTRU
/// key coefficients.
inline std::vector<long long> sample_small_polynomial(int n, double sigma,
                                                      std::uint64_t seed,
                                                      long long steps = 2000) {
  GaussianConfig cfg;
  cfg.n = n;
  cfg.sigma = sigma;
  cfg.steps = steps;
  cfg.burn_in = 0;
  cfg.seed = seed;
  return run_chain(cfg).final_position;
}

/// Post-burn-in mean of the recorded norms.
inline double mean_norm(const NormTrace& trace) {
  if (trace.norms.empty()) return 0.0;
  const std::size_t from = static_cast<std::size_t>(trace.burn_in);
  double s = 0.0;
  for (std::size_t i = from; i < trace.norms.size(); ++i) s += trace.norms[i];
  return s / static_cast<double>(trace.norms.size() - from);
}

inline double acceptance_rate(const NormTrace& trace) {
  if (trace.accepted.empty()) return 0.0;
  long long a = 0;
  for (auto f : trace.accepted) a += f;
  return static_cast<double>(a) / static_cast<double>(trace.accepted.size());
}

}  // namespace latgauss::mcmc
