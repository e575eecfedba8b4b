#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

struct CliFixture {
  fs::path dir;

  CliFixture() {
    dir = fs::temp_directory_path() /
          ("latgauss_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~CliFixture() { fs::remove_all(dir); }

  std::string file(const std::string& name) const {
    return (dir / name).string();
  }

  RunResult run(const std::string& args) const {
    const std::string out_path = file("stdout.tmp");
    const std::string err_path = file("stderr.tmp");
    const std::string cmd = std::string(LATGAUSS_CLI_PATH) + " " + args +
                            " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
  }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

}  // namespace

TEST_CASE("flag validation maps to exit code 2") {
  CliFixture cli;
  REQUIRE(cli.run("sample --n 16 --sigma 2.0 --steps 0 --out " +
                  cli.file("t.csv"))
              .exit_code == 2);
  REQUIRE(cli.run("sample --n 1 --sigma 2.0 --out " + cli.file("t.csv"))
              .exit_code == 2);
  REQUIRE(cli.run("sample --n 16 --sigma -1 --out " + cli.file("t.csv"))
              .exit_code == 2);
  REQUIRE(cli.run("sample --n 16 --sigma 2.0").exit_code == 2);  // missing --out
  REQUIRE(cli.run("nonsense").exit_code == 2);
  REQUIRE(cli.run("--help").exit_code == 0);
}

TEST_CASE("sample writes a trace and a summary line") {
  CliFixture cli;
  const auto r = cli.run("sample --n 32 --sigma 2.5 --steps 800 --seed 7 --out " +
                         cli.file("t.csv"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("mean_norm=") != std::string::npos);
  REQUIRE(r.out.find("acceptance_rate=") != std::string::npos);

  const auto body = CliFixture::slurp(cli.file("t.csv"));
  REQUIRE(body.rfind("step,norm,accepted\n", 0) == 0);
  // header + 800 rows
  REQUIRE(std::count(body.begin(), body.end(), '\n') == 801);

  const auto again =
      cli.run("sample --n 32 --sigma 2.5 --steps 800 --seed 7 --out " +
              cli.file("t2.csv"));
  REQUIRE(again.out == r.out);
  REQUIRE(CliFixture::slurp(cli.file("t2.csv")) == body);
}

TEST_CASE("analyze reports peaks and convergence, writes a histogram") {
  CliFixture cli;
  REQUIRE(cli.run("sample --n 64 --sigma 3.0 --steps 4000 --seed 3 --out " +
                  cli.file("t.csv"))
              .exit_code == 0);
  const auto r = cli.run("analyze --trace " + cli.file("t.csv"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("peaks=") != std::string::npos);
  REQUIRE(r.out.find("convergence_iteration=") != std::string::npos);
  REQUIRE(fs::exists(cli.file("t.hist.csv")));

  const auto again = cli.run("analyze --trace " + cli.file("t.csv"));
  REQUIRE(again.out == r.out);
}

TEST_CASE("analyze rejects malformed traces with a line number") {
  CliFixture cli;
  std::ofstream(cli.file("bad.csv")) << "step,norm,accepted\n0,zzz,1\n";
  const auto r = cli.run("analyze --trace " + cli.file("bad.csv"));
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.err.find("line 2") != std::string::npos);

  std::ofstream(cli.file("empty.csv")) << "";
  REQUIRE(cli.run("analyze --trace " + cli.file("empty.csv")).exit_code == 2);
}

TEST_CASE("table emits the builtin rows or a config file") {
  CliFixture cli;
  const auto builtin = cli.run("table --builtin-table1");
  REQUIRE(builtin.exit_code == 0);
  REQUIRE(std::count(builtin.out.begin(), builtin.out.end(), '\n') == 17);
  REQUIRE(builtin.out.find("Optimized,1024,4.00") != std::string::npos);
  REQUIRE(builtin.out.find("301.87") != std::string::npos);

  std::ofstream(cli.file("cfg.txt")) << "dev 256 2.5\n";
  const auto custom = cli.run("table --config " + cli.file("cfg.txt"));
  REQUIRE(custom.exit_code == 0);
  REQUIRE(custom.out.find("63.57") != std::string::npos);

  std::ofstream(cli.file("empty.txt")) << "# nothing\n";
  const auto empty = cli.run("table --config " + cli.file("empty.txt"));
  REQUIRE(empty.exit_code == 0);
  REQUIRE(empty.out == "name,N,sigma,log2_q_security,log10_q_security,"
                       "time_complexity,log10_time,classification\n");

  std::ofstream(cli.file("bad.txt")) << "dev 256 2.5\noops\n";
  const auto bad = cli.run("table --config " + cli.file("bad.txt"));
  REQUIRE(bad.exit_code == 2);
  REQUIRE(bad.err.find("line 2") != std::string::npos);

  REQUIRE(cli.run("table").exit_code == 2);
}

TEST_CASE("keygen writes reloadable key files") {
  CliFixture cli;
  const auto r =
      cli.run("keygen --n 64 --seed 5 --out " + cli.file("key"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(cli.file("key.pub")));
  REQUIRE(fs::exists(cli.file("key.priv")));

  const auto again =
      cli.run("keygen --n 64 --seed 5 --out " + cli.file("key2"));
  REQUIRE(again.exit_code == 0);
  REQUIRE(CliFixture::slurp(cli.file("key.pub")) ==
          CliFixture::slurp(cli.file("key2.pub")));
  REQUIRE(CliFixture::slurp(cli.file("key.priv")) ==
          CliFixture::slurp(cli.file("key2.priv")));
}

TEST_CASE("keygen exhaustion surfaces as exit code 3") {
  CliFixture cli;
  const auto r = cli.run("keygen --n 64 --key-sigma 30 --seed 1 --out " +
                         cli.file("k"));
  REQUIRE(r.exit_code == 3);
  REQUIRE(r.err.find("key-sigma") != std::string::npos);
}

TEST_CASE("roundtrip reports trials and successes") {
  CliFixture cli;
  const auto r = cli.run("roundtrip --n 64 --trials 50 --seed 1");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out == "trials=50 successes=50\n");

  const auto neg = cli.run(
      "roundtrip --n 64 --trials 50 --seed 1 --key-sigma 20 --no-margin-check");
  REQUIRE(neg.exit_code == 0);
  REQUIRE(neg.out.rfind("trials=50 successes=", 0) == 0);
  REQUIRE(neg.out != "trials=50 successes=50\n");
}

TEST_CASE("sweep runs the grid and writes a deterministic summary") {
  CliFixture cli;
  for (int variant = 1; variant <= 2; ++variant) {
    std::ofstream spec(cli.file("spec" + std::to_string(variant) + ".txt"));
    spec << "dims=16,32\nsigmas=2.5\nsteps=2400\nseeds=1,2\noutput_dir="
         << cli.file("out" + std::to_string(variant)) << "\n";
  }
  const auto r1 = cli.run("sweep --spec " + cli.file("spec1.txt") + " --jobs 1");
  REQUIRE(r1.exit_code == 0);
  const auto r8 = cli.run("sweep --spec " + cli.file("spec2.txt") + " --jobs 8");
  REQUIRE(r8.exit_code == 0);

  const auto s1 = CliFixture::slurp(cli.file("out1/summary.csv"));
  const auto s8 = CliFixture::slurp(cli.file("out2/summary.csv"));
  REQUIRE(!s1.empty());
  REQUIRE(s1 == s8);
  REQUIRE(s1.rfind("N,sigma,seed,mean_norm,acceptance_rate,"
                   "convergence_iteration,log10_q_security\n",
                   0) == 0);
  REQUIRE(std::count(s1.begin(), s1.end(), '\n') == 5);  // header + 4 chains

  REQUIRE(CliFixture::slurp(cli.file("out1/trace_N16_sigma2.5_seed1.csv")) ==
          CliFixture::slurp(cli.file("out2/trace_N16_sigma2.5_seed1.csv")));
  REQUIRE(fs::exists(cli.file("out1/analysis_N32_sigma2.5_seed2.txt")));
}

TEST_CASE("sweep refuses an unwritable output directory") {
  CliFixture cli;
  std::ofstream spec(cli.file("spec.txt"));
  spec << "dims=16\nsigmas=2.5\nsteps=2400\nseeds=1\n"
       << "output_dir=/proc/latgauss_cannot_write\n";
  spec.close();
  REQUIRE(cli.run("sweep --spec " + cli.file("spec.txt")).exit_code == 2);
}

TEST_CASE("sample defaults produce a 10000-row trace with concentrated norms") {
  CliFixture cli;
  const auto r = cli.run("sample --n 1024 --sigma 4.0 --seed 7 --out " +
                         cli.file("big.csv"));
  REQUIRE(r.exit_code == 0);
  const auto body = CliFixture::slurp(cli.file("big.csv"));
  REQUIRE(std::count(body.begin(), body.end(), '\n') == 10001);
  const auto pos = r.out.find("mean_norm=");
  REQUIRE(pos != std::string::npos);
  const double mean = std::stod(r.out.substr(pos + 10));
  REQUIRE(mean > 125.0);
  REQUIRE(mean < 135.0);
}

TEST_CASE("analyze of a constant trace: immediate convergence, one peak") {
  CliFixture cli;
  std::ofstream trace(cli.file("const.csv"));
  trace << "step,norm,accepted\n";
  for (int i = 0; i < 2000; ++i) trace << i << ",42.000000,1\n";
  trace.close();
  const auto r = cli.run("analyze --trace " + cli.file("const.csv"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("convergence_iteration=0\n") != std::string::npos);
  const auto peaks_line = r.out.substr(0, r.out.find('\n'));
  REQUIRE(peaks_line.rfind("peaks=", 0) == 0);
  REQUIRE(std::count(peaks_line.begin(), peaks_line.end(), ';') == 0);
  REQUIRE(peaks_line.size() > 6);  // exactly one peak listed
}
