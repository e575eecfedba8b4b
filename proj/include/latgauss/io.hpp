#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "latgauss/diagnostics.hpp"
#include "latgauss/mcmc.hpp"
#include "latgauss/ntru.hpp"
#include "latgauss/ring.hpp"
#include "latgauss/security.hpp"

namespace latgauss::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  long long line() const { return line_; }

 private:
  long long line_;
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline bool is_blank_or_comment(const std::string& s) {
  for (char c : s) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t') return false;
  }
  return true;
}

}  // namespace detail

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  detail::write_file(path, content);
}

// ---- trace CSV: step,norm,accepted ----------------------------------

inline std::string trace_csv(const mcmc::NormTrace& trace) {
  std::string out = "step,norm,accepted\n";
  for (std::size_t i = 0; i < trace.norms.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += detail::fmt("%.6f", trace.norms[i]);
    out += ',';
    out += trace.accepted[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline void write_trace_csv(const std::string& path,
                            const mcmc::NormTrace& trace) {
  detail::write_file(path, trace_csv(trace));
}

struct TraceData {
  std::vector<double> norms;
  std::vector<std::uint8_t> accepted;
};

inline TraceData read_trace_csv(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw ParseError("empty trace file", 1);
  if (lines[0] != "step,norm,accepted")
    throw ParseError("expected header 'step,norm,accepted'", 1);
  TraceData data;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.empty()) continue;
    const long long lineno = static_cast<long long>(i) + 1;
    std::size_t c1 = line.find(',');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                             : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw ParseError("expected three comma-separated fields", lineno);
    try {
      std::size_t used = 0;
      const std::string step_s = line.substr(0, c1);
      (void)std::stoll(step_s, &used);
      if (used != step_s.size()) throw std::invalid_argument("step");
      const std::string norm_s = line.substr(c1 + 1, c2 - c1 - 1);
      const double norm = std::stod(norm_s, &used);
      if (used != norm_s.size()) throw std::invalid_argument("norm");
      const std::string acc_s = line.substr(c2 + 1);
      if (acc_s != "0" && acc_s != "1")
        throw std::invalid_argument("accepted flag");
      data.norms.push_back(norm);
      data.accepted.push_back(acc_s == "1" ? 1 : 0);
    } catch (const std::exception&) {
      throw ParseError("malformed trace row", lineno);
    }
  }
  return data;
}

// ---- histogram CSV: bin_low,bin_high,count ---------------------------

inline std::string histogram_csv(const diag::HistogramSummary& hist) {
  std::string out = "bin_low,bin_high,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out += detail::fmt("%.6f", hist.bin_edges[i]);
    out += ',';
    out += detail::fmt("%.6f", hist.bin_edges[i + 1]);
    out += ',';
    out += std::to_string(hist.counts[i]);
    out += '\n';
  }
  return out;
}

inline void write_histogram_csv(const std::string& path,
                                const diag::HistogramSummary& hist) {
  detail::write_file(path, histogram_csv(hist));
}

// ---- analysis report: flat key=value block ---------------------------

inline std::string analysis_report(const diag::HistogramSummary& hist) {
  std::string peaks;
  for (std::size_t i = 0; i < hist.peaks.size(); ++i) {
    if (i) peaks += ';';
    peaks += detail::fmt("%.6f", hist.peaks[i]);
  }
  std::string conv = hist.convergence_iteration
                         ? std::to_string(*hist.convergence_iteration)
                         : "NC";
  return "peaks=" + peaks + "\nconvergence_iteration=" + conv + "\n";
}

// ---- security table CSV ----------------------------------------------

inline std::string security_csv_header() {
  return "name,N,sigma,log2_q_security,log10_q_security,time_complexity,"
         "log10_time,classification\n";
}

inline std::string security_csv_row(const sec::SecurityRow& row) {
  std::string out = row.name;
  out += ',';
  out += std::to_string(row.n);
  out += ',';
  out += detail::fmt("%.2f", row.sigma);
  out += ',';
  out += detail::fmt("%.2f", row.log2_q_security);
  out += ',';
  out += detail::fmt("%.2f", row.log10_q_security);
  out += ',';
  out += detail::fmt("%.2e", row.time_complexity);  // 3 significant digits
  out += ',';
  out += detail::fmt("%.2f", row.log10_time);
  out += ',';
  out += sec::to_string(row.classification);
  out += '\n';
  return out;
}

inline std::string security_csv(const std::vector<sec::SecurityRow>& rows) {
  std::string out = security_csv_header();
  for (const auto& row : rows) out += security_csv_row(row);
  return out;
}

// ---- table config file: one "name N sigma" per line, # comments ------

inline std::vector<sec::SecurityConfig> parse_table_config(
    const std::vector<std::string>& lines) {
  std::vector<sec::SecurityConfig> configs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const long long lineno = static_cast<long long>(i) + 1;
    std::string line = lines[i];
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    if (detail::is_blank_or_comment(line)) continue;
    // Name may contain spaces: N and sigma are the last two tokens.
    std::istringstream is(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (is >> tok) tokens.push_back(tok);
    if (tokens.size() < 3)
      throw ParseError("expected 'name N sigma'", lineno);
    sec::SecurityConfig cfg;
    try {
      std::size_t used = 0;
      cfg.n = std::stoi(tokens[tokens.size() - 2], &used);
      if (used != tokens[tokens.size() - 2].size())
        throw std::invalid_argument("N");
      cfg.sigma = std::stod(tokens.back(), &used);
      if (used != tokens.back().size()) throw std::invalid_argument("sigma");
    } catch (const std::exception&) {
      throw ParseError("expected 'name N sigma'", lineno);
    }
    if (cfg.n < 1 || !(cfg.sigma > 0.0))
      throw ParseError("N must be >= 1 and sigma > 0", lineno);
    for (std::size_t t = 0; t + 2 < tokens.size(); ++t) {
      if (t) cfg.name += ' ';
      cfg.name += tokens[t];
    }
    configs.push_back(std::move(cfg));
  }
  return configs;
}

inline std::vector<sec::SecurityConfig> read_table_config(
    const std::string& path) {
  return parse_table_config(detail::read_lines(path));
}

// ---- key files --------------------------------------------------------
// Public: "N q p" then h. Private: "N q p", f, h, g, f_inv_q, f_inv_p.
// All coefficient lines are space-separated signed decimals.

inline std::string public_key_text(const ntru::NtruKeyPair& kp) {
  std::string out = std::to_string(kp.params.n) + ' ' +
                    std::to_string(kp.params.q) + ' ' +
                    std::to_string(kp.params.p) + '\n';
  out += ring::to_line(kp.h) + '\n';
  return out;
}

inline std::string private_key_text(const ntru::NtruKeyPair& kp) {
  std::string out = std::to_string(kp.params.n) + ' ' +
                    std::to_string(kp.params.q) + ' ' +
                    std::to_string(kp.params.p) + '\n';
  out += ring::to_line(kp.f) + '\n';
  out += ring::to_line(kp.h) + '\n';
  out += ring::to_line(kp.g) + '\n';
  out += ring::to_line(kp.f_inv_q) + '\n';
  out += ring::to_line(kp.f_inv_p) + '\n';
  return out;
}

inline void write_key_files(const std::string& prefix,
                            const ntru::NtruKeyPair& kp) {
  detail::write_file(prefix + ".pub", public_key_text(kp));
  detail::write_file(prefix + ".priv", private_key_text(kp));
}

struct PublicKey {
  ring::RingParams params;
  ring::RingElement h;
};

namespace detail {

inline ring::RingParams parse_params_line(const std::string& line) {
  std::istringstream is(line);
  ring::RingParams params;
  if (!(is >> params.n >> params.q >> params.p))
    throw ParseError("expected 'N q p' header", 1);
  std::string rest;
  if (is >> rest) throw ParseError("trailing tokens after 'N q p'", 1);
  params.validate();
  return params;
}

}  // namespace detail

inline PublicKey read_public_key(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.size() < 2) throw ParseError("public key needs 2 lines", 1);
  PublicKey pk;
  pk.params = detail::parse_params_line(lines[0]);
  try {
    pk.h = ring::parse_line(lines[1], pk.params.n);
  } catch (const std::exception& e) {
    throw ParseError(e.what(), 2);
  }
  return pk;
}

inline ntru::NtruKeyPair read_private_key(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.size() < 6) throw ParseError("private key needs 6 lines", 1);
  ntru::NtruKeyPair kp;
  kp.params = detail::parse_params_line(lines[0]);
  ring::RingElement* fields[] = {&kp.f, &kp.h, &kp.g, &kp.f_inv_q, &kp.f_inv_p};
  for (std::size_t i = 0; i < 5; ++i) {
    try {
      *fields[i] = ring::parse_line(lines[i + 1], kp.params.n);
    } catch (const std::exception& e) {
      throw ParseError(e.what(), static_cast<long long>(i) + 2);
    }
  }
  return kp;
}

// ---- sweep spec: flat key=value lines, comma-separated lists ----------

struct SweepSpec {
  std::vector<int> dims;
  std::vector<double> sigmas;
  long long steps = mcmc::kDefaultSteps;
  std::vector<std::uint64_t> seeds;
  std::string output_dir;
};

inline SweepSpec parse_sweep_spec(const std::vector<std::string>& lines) {
  SweepSpec spec;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const long long lineno = static_cast<long long>(i) + 1;
    std::string line = lines[i];
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    if (detail::is_blank_or_comment(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value", lineno);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    std::istringstream vs(value);
    std::string item;
    try {
      if (key == "dims") {
        while (std::getline(vs, item, ',')) spec.dims.push_back(std::stoi(item));
      } else if (key == "sigmas") {
        while (std::getline(vs, item, ',')) spec.sigmas.push_back(std::stod(item));
      } else if (key == "seeds") {
        while (std::getline(vs, item, ','))
          spec.seeds.push_back(static_cast<std::uint64_t>(std::stoull(item)));
      } else if (key == "steps") {
        spec.steps = std::stoll(value);
      } else if (key == "output_dir") {
        spec.output_dir = value;
      } else {
        throw ParseError("unknown key '" + key + "'", lineno);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("malformed value for '" + key + "'", lineno);
    }
  }
  if (spec.dims.empty()) throw ParseError("dims must be non-empty", 1);
  if (spec.sigmas.empty()) throw ParseError("sigmas must be non-empty", 1);
  if (spec.seeds.empty()) throw ParseError("seeds must be non-empty", 1);
  if (spec.steps < 1) throw ParseError("steps must be >= 1", 1);
  if (spec.output_dir.empty()) throw ParseError("output_dir must be set", 1);
  return spec;
}

inline SweepSpec read_sweep_spec(const std::string& path) {
  return parse_sweep_spec(detail::read_lines(path));
}

}  // namespace latgauss::io
