#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace latgauss::sec {

inline constexpr double kDefaultKappa = 4.79;
inline constexpr double kLog10Of2 = 0.30102999566398119521;

enum class SecurityClass { insufficient, standard, high, maximum };

inline const char* to_string(SecurityClass c) {
  switch (c) {
    case SecurityClass::insufficient: return "insufficient";
    case SecurityClass::standard: return "standard";
    case SecurityClass::high: return "high";
    case SecurityClass::maximum: return "maximum";
  }
  return "?";
}

/// log2 of the volume of the N-dimensional Euclidean ball of radius
/// alpha: (N/2) log2(pi) + N log2(alpha) - log2(Gamma(N/2 + 1)).
inline double log2_ball_volume(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const double ln2 = std::numbers::ln2;
  return 0.5 * n * std::log2(std::numbers::pi) + n * std::log2(alpha) -
         std::lgamma(0.5 * n + 1.0) / ln2;
}

struct LogSecurity {
  double log2_value = 0.0;
  double log10_value = 0.0;
};

/// log of sqrt(2^N / Vol(B_alpha)) with alpha = sigma, entirely in the
/// log domain; the raw metric reaches 10^300 and is never materialized.
inline LogSecurity log_q_security(int n, double sigma) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double l2 = 0.5 * (static_cast<double>(n) - log2_ball_volume(n, sigma));
  return LogSecurity{l2, l2 * kLog10Of2};
}

/// kappa * N^3 * log2(N) abstract operation count.
inline double time_complexity(int n, double kappa = kDefaultKappa) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  const double nd = static_cast<double>(n);
  return kappa * nd * nd * nd * std::log2(nd);
}

/// N^2 with unit constant; informational only.
inline double space_complexity(int n) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  return static_cast<double>(n) * static_cast<double>(n);
}

/// Heuristic classical-hardness exponent N / log2(N).
inline double classical_security_exponent(int n) {
  if (n < 2) throw std::invalid_argument("N must be >= 2");
  return static_cast<double>(n) / std::log2(static_cast<double>(n));
}

/// Heuristic sampling-width index sqrt(N / (alpha * log2 N)).
inline double gamma_security_index(int n, double alpha) {
  if (n < 2) throw std::invalid_argument("N must be >= 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return std::sqrt(static_cast<double>(n) /
                   (alpha * std::log2(static_cast<double>(n))));
}

/// Threshold classification of the base-10 log security value.
inline SecurityClass classify(double log10_q) {
  if (log10_q < 100.0) return SecurityClass::insufficient;
  if (log10_q < 180.0) return SecurityClass::standard;
  if (log10_q < 280.0) return SecurityClass::high;
  return SecurityClass::maximum;
}

struct SecurityConfig {
  std::string name;
  int n = 0;
  double sigma = 0.0;
};

struct SecurityRow {
  std::string name;
  int n = 0;
  double sigma = 0.0;
  double log2_q_security = 0.0;
  double log10_q_security = 0.0;
  double time_complexity = 0.0;
  double log10_time = 0.0;
  double space_complexity = 0.0;
  SecurityClass classification = SecurityClass::insufficient;
};

inline SecurityRow make_row(const SecurityConfig& cfg,
                            double kappa = kDefaultKappa) {
  SecurityRow row;
  row.name = cfg.name;
  row.n = cfg.n;
  row.sigma = cfg.sigma;
  const LogSecurity ls = log_q_security(cfg.n, cfg.sigma);
  row.log2_q_security = ls.log2_value;
  row.log10_q_security = ls.log10_value;
  row.time_complexity = time_complexity(cfg.n, kappa);
  row.log10_time = std::log10(row.time_complexity);
  row.space_complexity = space_complexity(cfg.n);
  row.classification = classify(row.log10_q_security);
  return row;
}

/// One row per config, sorted by (N, sigma). Duplicates stay.
inline std::vector<SecurityRow> build_table(
    const std::vector<SecurityConfig>& configs, double kappa = kDefaultKappa) {
  std::vector<SecurityRow> rows;
  rows.reserve(configs.size());
  for (const auto& cfg : configs) rows.push_back(make_row(cfg, kappa));
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SecurityRow& a, const SecurityRow& b) {
                     if (a.n != b.n) return a.n < b.n;
                     return a.sigma < b.sigma;
                   });
  return rows;
}

/// The sixteen published configurations. The duplicated
/// "Configuration 12" label is kept as printed in the source table.
inline std::vector<SecurityConfig> table1_configs() {
  return {
      {"Baseline", 256, 2.5},
      {"Configuration 2", 256, 3.0},
      {"Configuration 3", 256, 3.5},
      {"Configuration 4", 256, 4.0},
      {"Configuration 5", 256, 4.5},
      {"Configuration 6", 512, 2.5},
      {"Configuration 7", 512, 3.0},
      {"Configuration 8", 512, 3.5},
      {"Configuration 9", 512, 4.0},
      {"Configuration 10", 512, 4.5},
      {"Balanced", 768, 3.5},
      {"Configuration 11", 768, 4.0},
      {"Configuration 12", 768, 4.5},
      {"Optimized", 1024, 4.0},
      {"High Efficiency", 1024, 4.5},
      {"Configuration 12", 1024, 5.0},
  };
}

}  // namespace latgauss::sec
