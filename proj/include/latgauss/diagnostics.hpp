#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "latgauss/mcmc.hpp"

namespace latgauss::diag {

inline constexpr int kDefaultBinCount = 50;
inline constexpr long long kDefaultWindow = 500;
inline constexpr double kDefaultDelta = 0.02;

struct HistogramSummary {
  std::vector<double> bin_edges;   // strictly increasing, counts.size()+1
  std::vector<long long> counts;
  std::vector<double> peaks;       // filled by find_peaks
  std::optional<long long> convergence_iteration;  // filled by analyze_mixing
};

/// Equal-width histogram of the post-burn-in norms. A degenerate range
/// (all samples equal) is widened to +/- 0.5 around the common value so
/// the edges stay strictly increasing.
inline HistogramSummary histogram(const mcmc::NormTrace& trace,
                                  int bin_count = kDefaultBinCount) {
  if (bin_count < 2) throw std::invalid_argument("bin count must be >= 2");
  const std::size_t from = static_cast<std::size_t>(trace.burn_in);
  if (from >= trace.norms.size())
    throw std::invalid_argument("trace has no post-burn-in samples");
  double lo = trace.norms[from], hi = trace.norms[from];
  for (std::size_t i = from; i < trace.norms.size(); ++i) {
    lo = std::min(lo, trace.norms[i]);
    hi = std::max(hi, trace.norms[i]);
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  HistogramSummary h;
  h.counts.assign(static_cast<std::size_t>(bin_count), 0);
  h.bin_edges.resize(static_cast<std::size_t>(bin_count) + 1);
  const double width = (hi - lo) / bin_count;
  for (int b = 0; b <= bin_count; ++b)
    h.bin_edges[static_cast<std::size_t>(b)] = lo + width * b;
  h.bin_edges.back() = hi;
  for (std::size_t i = from; i < trace.norms.size(); ++i) {
    auto b = static_cast<long long>((trace.norms[i] - lo) / width);
    b = std::clamp(b, 0LL, static_cast<long long>(bin_count) - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

/// Peak detection over histogram counts: a centered 5-bin moving
/// average (truncated at the edges) is searched for strict local maxima
/// whose smoothed height is at least 5% of the global smoothed maximum.
/// Returns the centers of the peak bins, ascending.
inline std::vector<double> find_peaks(const HistogramSummary& hist) {
  const std::size_t n = hist.counts.size();
  if (n == 0) return {};
  std::vector<double> smooth(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(i + 2, n - 1);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j)
      s += static_cast<double>(hist.counts[j]);
    smooth[i] = s / static_cast<double>(hi - lo + 1);
  }
  const double peak_floor = 0.05 * *std::max_element(smooth.begin(), smooth.end());
  // Smoothing can flatten a sharp mode into a plateau, so maximal runs
  // of equal smoothed height count as one candidate, located at the
  // run's center bin.
  std::vector<double> peaks;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && smooth[j] == smooth[i]) ++j;
    const bool has_left = i > 0;
    const bool has_right = j < n;
    const bool left_lower = has_left && smooth[i - 1] < smooth[i];
    const bool right_lower = has_right && smooth[j] < smooth[i];
    const bool is_peak = (has_left || has_right) &&
                         (!has_left || left_lower) &&
                         (!has_right || right_lower);
    if (is_peak && smooth[i] >= peak_floor) {
      const std::size_t mid = (i + j - 1) / 2;
      peaks.push_back(0.5 * (hist.bin_edges[mid] + hist.bin_edges[mid + 1]));
    }
    i = j;
  }
  return peaks;
}

/// Mean-band convergence statistic. With mu = mean of the final quarter
/// of the norms, returns the smallest t such that every `window`-length
/// sliding-window mean over [t, end) stays within delta*mu of mu;
/// nullopt (NotConverged) when even the final window escapes the band.
inline std::optional<long long> analyze_mixing_norms(
    const std::vector<double>& norms, long long window = kDefaultWindow,
    double delta = kDefaultDelta) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const auto n = static_cast<long long>(norms.size());
  if (n < 4 * window)
    throw std::invalid_argument("trace too short: need at least 4*window samples");
  double tail = 0.0;
  const long long tail_from = n - n / 4;
  for (long long i = tail_from; i < n; ++i) tail += norms[static_cast<std::size_t>(i)];
  const double mu = tail / static_cast<double>(n - tail_from);
  const double band = delta * mu;

  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (long long i = 0; i < n; ++i)
    prefix[static_cast<std::size_t>(i) + 1] =
        prefix[static_cast<std::size_t>(i)] + norms[static_cast<std::size_t>(i)];
  const long long last_start = n - window;
  long long last_bad = -1;
  for (long long s = 0; s <= last_start; ++s) {
    const double wm = (prefix[static_cast<std::size_t>(s + window)] -
                       prefix[static_cast<std::size_t>(s)]) /
                      static_cast<double>(window);
    if (std::abs(wm - mu) > band) last_bad = s;
  }
  if (last_bad < 0) return 0;
  if (last_bad == last_start) return std::nullopt;
  return last_bad + 1;
}

inline std::optional<long long> analyze_mixing(const mcmc::NormTrace& trace,
                                               long long window = kDefaultWindow,
                                               double delta = kDefaultDelta) {
  return analyze_mixing_norms(trace.norms, window, delta);
}

/// Mixing-time upper bound C * N^2 * ln(1/epsilon).
inline double mixing_time_bound(int n, double epsilon, double c) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::domain_error("epsilon must lie in (0, 1)");
  if (!(c > 0.0)) throw std::invalid_argument("C must be positive");
  return c * static_cast<double>(n) * static_cast<double>(n) *
         std::log(1.0 / epsilon);
}

struct MixingMeasurement {
  int n = 0;
  std::optional<long long> convergence_iteration;
};

/// Least-squares slope of log(convergence_iteration) against log(N).
/// Requires at least three distinct N values, all converged with a
/// positive iteration count.
inline double fit_mixing_exponent(const std::vector<MixingMeasurement>& ms) {
  std::vector<double> xs, ys;
  std::vector<int> distinct;
  for (const auto& m : ms) {
    if (!m.convergence_iteration)
      throw std::invalid_argument("measurements contain a NotConverged entry");
    if (*m.convergence_iteration < 1)
      throw std::invalid_argument("convergence iteration must be positive for the log fit");
    if (m.n < 1) throw std::invalid_argument("N must be >= 1");
    xs.push_back(std::log(static_cast<double>(m.n)));
    ys.push_back(std::log(static_cast<double>(*m.convergence_iteration)));
    if (std::find(distinct.begin(), distinct.end(), m.n) == distinct.end())
      distinct.push_back(m.n);
  }
  if (distinct.size() < 3)
    throw std::invalid_argument("need at least three distinct N values");
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace latgauss::diag
