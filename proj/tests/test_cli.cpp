// End-to-end checks of the command-line tool: output shapes, determinism,
// exit codes. The binary path arrives via the TELENOISE_CLI environment
// variable set by CTest.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAIL: " << what << "\n";
  }
}

std::string tmp_dir() {
  const char* dir = std::getenv("TELENOISE_TMP");
  return dir ? dir : "/tmp";
}

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run(const std::string& cli, const std::string& args) {
  const std::string out_path = tmp_dir() + "/cli_stdout.txt";
  const std::string cmd = cli + " " + args + " > " + out_path + " 2> " +
                          tmp_dir() + "/cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream file(out_path);
  std::stringstream buf;
  buf << file.rdbuf();
  result.stdout_text = buf.str();
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path);
  std::stringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path);
  file << content;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

}  // namespace

int main() {
  const char* cli_env = std::getenv("TELENOISE_CLI");
  if (!cli_env) {
    std::cerr << "TELENOISE_CLI not set\n";
    return 1;
  }
  const std::string cli = cli_env;

  // threshold: the closed-form numbers
  {
    const RunResult res = run(cli, "threshold --B 6");
    expect(res.exit_code == 0, "threshold exit code");
    const auto j = nlohmann::json::parse(res.stdout_text);
    expect(j.at("p_th_bound").get<double>() == 0.01, "threshold p bound");
    expect(std::abs(j.at("theta_bound").get<double>() - 0.020034) < 1e-5,
           "threshold theta bound");

    const RunResult res2 = run(cli, "threshold --p-th 0.030");
    const auto j2 = nlohmann::json::parse(res2.stdout_text);
    expect(std::abs(j2.at("theta_bound").get<double>() - 0.0349) < 5e-4,
           "threshold theta at numeric p");
  }

  // chain: row count, header, byte determinism
  {
    const std::string config = tmp_dir() + "/chain.json";
    write_file(config,
               R"({"T": 20, "error": {"type": "rot_axis", "axis": [3,1,2],
                   "theta": 0.08}, "mc_samples": 2000})");
    const std::string out1 = tmp_dir() + "/chain1.csv";
    const std::string out2 = tmp_dir() + "/chain2.csv";
    const RunResult r1 =
        run(cli, "chain --input " + config + " --seed 7 --output " + out1);
    const RunResult r2 =
        run(cli, "chain --input " + config + " --seed 7 --output " + out2);
    expect(r1.exit_code == 0 && r2.exit_code == 0, "chain exit codes");
    const std::string csv1 = read_file(out1);
    expect(csv1 == read_file(out2), "chain output is byte-identical");
    expect(csv1.rfind("t,r_exact,r_free,r_rc,r_mc,mc_stderr\n", 0) == 0,
           "chain CSV header");
    expect(count_lines(csv1) == 21, "chain CSV row count");

    // r_exact column is monotone nondecreasing for this error
    std::istringstream lines(csv1);
    std::string line;
    std::getline(lines, line);
    double prev = -1.0;
    bool monotone = true;
    while (std::getline(lines, line)) {
      const auto comma = line.find(',');
      const auto next = line.find(',', comma + 1);
      const double r = std::stod(line.substr(comma + 1, next - comma - 1));
      if (r < prev) monotone = false;
      prev = r;
    }
    expect(monotone, "chain r_exact monotone");

    // sampling without a seed is a usage error
    const RunResult no_seed = run(cli, "chain --input " + config);
    expect(no_seed.exit_code == 2, "chain without seed exits 2");
  }

  // bounds: header and row count
  {
    const std::string config = tmp_dir() + "/bounds.json";
    write_file(config,
               R"({"T": 30, "error": {"type": "rot_axis", "axis": [3,1,2],
                   "theta": 0.04}})");
    const RunResult res = run(cli, "bounds --input " + config);
    expect(res.exit_code == 0, "bounds exit code");
    expect(res.stdout_text.rfind(
               "t,r_exact,r_lo2,r_hi2,r_lo3,r_hi3,r_simple,r_corollary\n",
               0) == 0,
           "bounds CSV header");
    expect(count_lines(res.stdout_text) == 31, "bounds CSV row count");
  }

  // foliate + verify on the [[4,1,2]] code
  {
    const std::string config = tmp_dir() + "/foliate.json";
    write_file(config, R"({
      "code": {"n": 4, "k": 1,
               "x_checks": [[1,1,1,1]],
               "z_checks": [[1,1,0,0],[0,0,1,1]],
               "logical_x": [[1,1,0,0]],
               "logical_z": [[1,0,1,0]]},
      "L": 1,
      "noise": {"W": 1, "homogeneous": {"type": "rot_z", "theta": 0.1}}
    })");
    const std::string csv_path = tmp_dir() + "/foliate.csv";
    const RunResult res =
        run(cli, "foliate --input " + config + " --csv " + csv_path);
    expect(res.exit_code == 0, "foliate exit code");
    const auto j = nlohmann::json::parse(res.stdout_text);
    expect(j.at("replacements").size() == 11, "foliate replacement count");
    const std::string csv = read_file(csv_path);
    expect(csv.rfind("gamma,t,w,axis,p\n", 0) == 0, "foliate CSV header");
    expect(count_lines(csv) == 12, "foliate CSV rows");

    const RunResult ver = run(cli, "verify --input " + config);
    expect(ver.exit_code == 0, "verify exit code");
    const auto vj = nlohmann::json::parse(ver.stdout_text);
    expect(vj.at("max_deviation").get<double>() < 1e-10,
           "verify max deviation");
    expect(vj.contains("raw_granularity"), "verify raw granularity report");

    // impure noise is rejected before simulation
    const std::string impure = tmp_dir() + "/impure.json";
    write_file(impure, R"({
      "code": {"n": 4, "k": 1,
               "x_checks": [[1,1,1,1]],
               "z_checks": [[1,1,0,0],[0,0,1,1]],
               "logical_x": [[1,1,0,0]],
               "logical_z": [[1,0,1,0]]},
      "L": 1,
      "noise": {"W": 1,
                "homogeneous": {"type": "rot_axis", "axis": [1,0,0],
                                "theta": 0.1}}
    })");
    const RunResult bad = run(cli, "verify --input " + impure);
    expect(bad.exit_code == 1, "impure noise exits 1");
  }

  // malformed input and exit codes
  {
    const std::string broken = tmp_dir() + "/broken.json";
    write_file(broken, R"({"T": 5, "error": {"type")");
    const RunResult res = run(cli, "chain --input " + broken);
    expect(res.exit_code == 2, "malformed JSON exits 2");

    const RunResult missing = run(cli, "chain --input /nonexistent.json");
    expect(missing.exit_code == 2, "missing file exits 2");

    const RunResult usage = run(cli, "frobnicate");
    expect(usage.exit_code == 2 || usage.exit_code == 1,
           "unknown subcommand fails");

    const std::string bad_key = tmp_dir() + "/badkey.json";
    write_file(bad_key, R"({"T": 5, "error": {"type": "rot_z"}})");
    const RunResult res2 = run(cli, "chain --input " + bad_key);
    expect(res2.exit_code == 2, "missing channel key exits 2");
  }

  if (failures == 0) {
    std::cout << "cli tests passed\n";
    return 0;
  }
  std::cerr << failures << " cli test(s) failed\n";
  return 1;
}
