// Command-line front end: run chains, analyze traces, build security
// tables, generate NTRU keys, and sweep configuration grids.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "latgauss/diagnostics.hpp"
#include "latgauss/io.hpp"
#include "latgauss/mcmc.hpp"
#include "latgauss/ntru.hpp"
#include "latgauss/ring.hpp"
#include "latgauss/security.hpp"

namespace {

namespace fs = std::filesystem;
using namespace latgauss;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_sigma(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct SampleArgs {
  int n = 0;
  double sigma = 0.0;
  long long steps = mcmc::kDefaultSteps;
  long long burn_in = -1;
  std::uint64_t seed = 0;
  std::string out;
};

int run_sample(const SampleArgs& args) {
  mcmc::GaussianConfig cfg;
  cfg.n = args.n;
  cfg.sigma = args.sigma;
  cfg.steps = args.steps;
  cfg.burn_in = args.burn_in;
  cfg.seed = args.seed;
  cfg.validate();
  const mcmc::ChainResult result = mcmc::run_chain(cfg);
  io::write_trace_csv(args.out, result.trace);
  std::cout << "mean_norm=" << fmt6(mcmc::mean_norm(result.trace))
            << " acceptance_rate=" << fmt6(mcmc::acceptance_rate(result.trace))
            << "\n";
  return kExitOk;
}

struct AnalyzeArgs {
  std::string trace_path;
  int bins = diag::kDefaultBinCount;
  long long window = diag::kDefaultWindow;
  double delta = diag::kDefaultDelta;
};

std::string histogram_path_for(const std::string& trace_path) {
  const std::string suffix = ".csv";
  if (trace_path.size() > suffix.size() &&
      trace_path.compare(trace_path.size() - suffix.size(), suffix.size(),
                         suffix) == 0)
    return trace_path.substr(0, trace_path.size() - suffix.size()) +
           ".hist.csv";
  return trace_path + ".hist.csv";
}

int run_analyze(const AnalyzeArgs& args) {
  const io::TraceData data = io::read_trace_csv(args.trace_path);
  if (data.norms.empty())
    throw io::ParseError("trace contains no samples", 2);
  mcmc::NormTrace trace;
  trace.norms = data.norms;
  trace.accepted = data.accepted;
  trace.burn_in = static_cast<long long>(trace.norms.size()) / 5;
  diag::HistogramSummary hist = diag::histogram(trace, args.bins);
  hist.peaks = diag::find_peaks(hist);
  hist.convergence_iteration =
      diag::analyze_mixing(trace, args.window, args.delta);
  io::write_histogram_csv(histogram_path_for(args.trace_path), hist);
  std::cout << io::analysis_report(hist);
  return kExitOk;
}

struct TableArgs {
  std::string config_path;
  bool builtin = false;
};

int run_table(const TableArgs& args) {
  std::vector<sec::SecurityConfig> configs;
  if (args.builtin)
    configs = sec::table1_configs();
  else
    configs = io::read_table_config(args.config_path);
  std::cout << io::security_csv(sec::build_table(configs));
  return kExitOk;
}

struct KeyArgs {
  int n = 0;
  long long q = 2048;
  long long p = 3;
  double key_sigma = 1.2;
  std::uint64_t seed = 0;
  std::string out_prefix = "ntru_key";
  long long trials = 1000;
  bool no_margin_check = false;
};

ntru::NtruKeyPair make_keypair(const KeyArgs& args) {
  ring::RingParams params{args.n, args.q, args.p};
  ntru::KeygenPolicy policy;
  policy.key_sigma = args.key_sigma;
  policy.margin_check = !args.no_margin_check;
  return ntru::keygen(params, policy, args.seed);
}

int run_keygen(const KeyArgs& args) {
  const ntru::NtruKeyPair kp = make_keypair(args);
  io::write_key_files(args.out_prefix, kp);
  std::cout << "public=" << args.out_prefix << ".pub private="
            << args.out_prefix << ".priv\n";
  return kExitOk;
}

int run_roundtrip(const KeyArgs& args) {
  const ntru::NtruKeyPair kp = make_keypair(args);
  Rng rng(args.seed + 0x9E3779B97F4A7C15ULL);
  long long successes = 0;
  for (long long t = 0; t < args.trials; ++t) {
    const ring::RingElement m = ntru::random_ternary(args.n, rng);
    const ring::RingElement r = ntru::random_ternary(args.n, rng);
    const ring::RingElement e = ntru::encrypt(kp.h, m, r, kp.params);
    if (ntru::decrypt(kp, e) == m) ++successes;
  }
  std::cout << "trials=" << args.trials << " successes=" << successes << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string spec_path;
  int jobs = 1;
};

struct SweepTask {
  int n = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

struct SweepOutcome {
  double mean_norm = 0.0;
  double acceptance_rate = 0.0;
  std::optional<long long> convergence_iteration;
};

int run_sweep(const SweepArgs& args) {
  io::SweepSpec spec = io::read_sweep_spec(args.spec_path);
  if (spec.steps < 4 * diag::kDefaultWindow) {
    std::cerr << "error: sweep needs steps >= " << 4 * diag::kDefaultWindow
              << " for the convergence analysis\n";
    return kExitUsage;
  }
  std::sort(spec.dims.begin(), spec.dims.end());
  std::sort(spec.sigmas.begin(), spec.sigmas.end());
  std::sort(spec.seeds.begin(), spec.seeds.end());

  fs::create_directories(spec.output_dir);
  const fs::path out_dir(spec.output_dir);
  {
    // Fail before any chain starts if the directory is not writable.
    const fs::path probe = out_dir / ".write_probe";
    std::ofstream test(probe);
    if (!test) {
      std::cerr << "error: output_dir is not writable: " << spec.output_dir
                << "\n";
      return kExitUsage;
    }
    test.close();
    fs::remove(probe);
  }

  std::vector<SweepTask> tasks;
  for (int n : spec.dims)
    for (double sigma : spec.sigmas)
      for (std::uint64_t seed : spec.seeds) tasks.push_back({n, sigma, seed});

  std::vector<SweepOutcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        const SweepTask& task = tasks[i];
        mcmc::GaussianConfig cfg;
        cfg.n = task.n;
        cfg.sigma = task.sigma;
        cfg.steps = spec.steps;
        cfg.seed = task.seed;
        const mcmc::ChainResult result = mcmc::run_chain(cfg);
        const std::string stem = "N" + std::to_string(task.n) + "_sigma" +
                                 fmt_sigma(task.sigma) + "_seed" +
                                 std::to_string(task.seed);
        io::write_trace_csv((out_dir / ("trace_" + stem + ".csv")).string(),
                            result.trace);
        diag::HistogramSummary hist = diag::histogram(result.trace);
        hist.peaks = diag::find_peaks(hist);
        hist.convergence_iteration = diag::analyze_mixing(result.trace);
        io::write_text_file((out_dir / ("analysis_" + stem + ".txt")).string(),
                            io::analysis_report(hist));
        outcomes[i] = {mcmc::mean_norm(result.trace),
                       mcmc::acceptance_rate(result.trace),
                       hist.convergence_iteration};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  const int jobs = std::max(1, args.jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  // Security values use lgamma; computed here on the main thread.
  std::string summary =
      "N,sigma,seed,mean_norm,acceptance_rate,convergence_iteration,"
      "log10_q_security\n";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const SweepTask& task = tasks[i];
    const SweepOutcome& o = outcomes[i];
    char head[96];
    std::snprintf(head, sizeof head, "%d,%s,%llu,", task.n,
                  fmt_sigma(task.sigma).c_str(),
                  static_cast<unsigned long long>(task.seed));
    summary += head;
    summary += fmt6(o.mean_norm);
    summary += ',';
    summary += fmt6(o.acceptance_rate);
    summary += ',';
    summary += o.convergence_iteration
                   ? std::to_string(*o.convergence_iteration)
                   : std::string("NC");
    summary += ',';
    char tail[32];
    std::snprintf(tail, sizeof tail, "%.2f",
                  sec::log_q_security(task.n, task.sigma).log10_value);
    summary += tail;
    summary += '\n';
  }
  io::write_text_file((out_dir / "summary.csv").string(), summary);
  std::cout << "wrote " << (out_dir / "summary.csv").string() << " ("
            << tasks.size() << " chains)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Gaussian MCMC sampling over Z^N with NTRU key "
               "generation and quantum-security metrics"};
  app.require_subcommand(1);

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Run one chain, write trace CSV");
  sample->add_option("--n", sample_args.n, "lattice dimension")
      ->required()
      ->check(CLI::Range(2, 65536));
  sample->add_option("--sigma", sample_args.sigma, "Gaussian parameter")
      ->required()
      ->check(CLI::PositiveNumber);
  sample->add_option("--steps", sample_args.steps, "MCMC steps")
      ->check(CLI::Range(1LL, 100000000LL));
  sample->add_option("--burn-in", sample_args.burn_in,
                     "discarded prefix (default steps/5)");
  sample->add_option("--seed", sample_args.seed, "RNG seed");
  sample->add_option("--out", sample_args.out, "trace CSV path")->required();

  AnalyzeArgs analyze_args;
  auto* analyze =
      app.add_subcommand("analyze", "Histogram, peaks and convergence of a trace");
  analyze->add_option("--trace", analyze_args.trace_path, "trace CSV path")
      ->required();
  analyze->add_option("--bins", analyze_args.bins, "histogram bin count")
      ->check(CLI::Range(2, 100000));
  analyze->add_option("--window", analyze_args.window, "sliding window length")
      ->check(CLI::Range(1LL, 100000000LL));
  analyze->add_option("--delta", analyze_args.delta, "relative band half-width")
      ->check(CLI::PositiveNumber);

  TableArgs table_args;
  auto* table = app.add_subcommand("table", "Security metrics table CSV");
  auto* cfg_opt =
      table->add_option("--config", table_args.config_path,
                        "config file, one 'name N sigma' per line");
  table->add_flag("--builtin-table1", table_args.builtin,
                  "emit the 16 built-in configurations");
  cfg_opt->excludes("--builtin-table1");

  KeyArgs key_args;
  auto add_key_options = [&key_args](CLI::App* cmd) {
    cmd->add_option("--n", key_args.n, "ring degree")
        ->required()
        ->check(CLI::Range(2, 65536));
    cmd->add_option("--q", key_args.q, "large modulus")->check(CLI::Range(16LL, 1LL << 31));
    cmd->add_option("--p", key_args.p, "small modulus")->check(CLI::Range(2LL, 32768LL));
    cmd->add_option("--key-sigma", key_args.key_sigma, "Gaussian width for f, g")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", key_args.seed, "RNG seed");
    cmd->add_flag("--no-margin-check", key_args.no_margin_check,
                  "skip the worst-case decryption margin check");
  };
  auto* keygen = app.add_subcommand("keygen", "Generate an NTRU key pair");
  add_key_options(keygen);
  keygen->add_option("--out", key_args.out_prefix,
                     "output path prefix (.pub/.priv)");
  auto* roundtrip =
      app.add_subcommand("roundtrip", "Encrypt/decrypt round-trip report");
  add_key_options(roundtrip);
  roundtrip->add_option("--trials", key_args.trials, "number of round trips")
      ->check(CLI::Range(1LL, 10000000LL));

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a dims x sigmas x seeds grid");
  sweep->add_option("--spec", sweep_args.spec_path, "sweep spec file")
      ->required();
  sweep->add_option("--jobs", sweep_args.jobs, "max concurrent chains")
      ->check(CLI::Range(1, 256));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sample->parsed()) return run_sample(sample_args);
    if (analyze->parsed()) return run_analyze(analyze_args);
    if (table->parsed()) {
      if (!table_args.builtin && table_args.config_path.empty()) {
        std::cerr << "error: table needs --config or --builtin-table1\n";
        return kExitUsage;
      }
      return run_table(table_args);
    }
    if (keygen->parsed()) return run_keygen(key_args);
    if (roundtrip->parsed()) return run_roundtrip(key_args);
    if (sweep->parsed()) return run_sweep(sweep_args);
  } catch (const ntru::KeygenExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
