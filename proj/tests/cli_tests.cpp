// End-to-end tests of the command-line tool: file formats, exit codes, and
// agreement with direct library calls.  Each case shells out to the built
// binary (path injected as CLI_BINARY).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "prabhakar/io.hpp"
#include "prabhakar/operators.hpp"

namespace {

std::string work_dir() {
  static const std::string dir = [] {
    std::string d = "/tmp/prabhakar_cli_test_" + std::to_string(getpid());
    std::remove(d.c_str());
    mkdir(d.c_str(), 0755);
    return d;
  }();
  return dir;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return {};
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

RunResult run_cli(const std::string& args) {
  const std::string out_path = work_dir() + "/stdout.txt";
  const std::string err_path = work_dir() + "/stderr.txt";
  const std::string cmd = std::string(CLI_BINARY) + " " + args + " > " +
                          out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

// CSV text -> header + numeric rows
struct Parsed {
  std::string header;
  std::vector<std::vector<double>> rows;
};

Parsed parse_csv(const std::string& text) {
  Parsed p;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      p.header = line;
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      row.push_back(std::strtod(cell.c_str(), nullptr));
    }
    p.rows.push_back(std::move(row));
  }
  return p;
}

void put_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f << content;
}

const char* kBaseProblem = R"({
  "beta": 0.7, "lambda": 0.4,
  "op": {"rho": 1.0, "alpha": 0.5, "gamma": 1.0, "omega": 0.3},
  "psi": {"kind": "identity"}, "interval": [0, 1], "b": [1.0],
  "forcing": {"type": "ml", "xi": 1.0, "mu": 1.2, "sigma": 1.0}
})";

}  // namespace

TEST_CASE("ml: unit parameters reproduce the exponential") {
  const RunResult r = run_cli("ml --rho 1 --alpha 1 --gamma 1 --z 0:1:0.5");
  CHECK(r.code == 0);
  const Parsed csv = parse_csv(r.out);
  CHECK(csv.header == "z,value,terms,converged");
  REQUIRE(csv.rows.size() == 3);
  const double want[] = {1.0, std::exp(0.5), std::exp(1.0)};
  for (int i = 0; i < 3; ++i) {
    REQUIRE(csv.rows[i].size() == 4);
    CHECK(std::abs(csv.rows[i][1] - want[i]) < 1e-12 * want[i]);
    CHECK(csv.rows[i][3] == 1.0);
  }
}

TEST_CASE("ml: gamma = 0 gives the constant 1/Gamma(1) = 1") {
  const RunResult r = run_cli("ml --rho 1 --alpha 1 --gamma 0 --z 0:10:1");
  CHECK(r.code == 0);
  const Parsed csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 11);
  for (const auto& row : csv.rows) CHECK(row[1] == 1.0);
}

TEST_CASE("ml: single-point grid against the reference value") {
  const RunResult r =
      run_cli("ml --rho 0.7 --alpha 1.2 --gamma 2.5 --z 0.9");
  CHECK(r.code == 0);
  const Parsed csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 1);
  CHECK(std::abs(csv.rows[0][1] - 9.385413280349582111157342) < 1e-12);
}

TEST_CASE("ml: deterministic output and report file") {
  const std::string report = work_dir() + "/ml_report.json";
  const std::string args =
      "ml --rho 0.8 --alpha 1.1 --gamma 1.5 --z 0:2:0.1 --report " + report;
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j["command"] == "ml");
  CHECK(j["converged"] == true);
  CHECK(j["points"] == 21);
}

TEST_CASE("ml: exit codes for bad input and non-convergence") {
  CHECK(run_cli("ml --rho -1 --alpha 1 --gamma 1 --z 0.5").code == 2);
  CHECK(run_cli("ml --rho 1 --alpha 1 --gamma 1 --z nonsense").code == 2);
  // a tiny term cap forces the non-convergence path
  const RunResult r =
      run_cli("ml --rho 1 --alpha 1 --gamma 1 --z 40 --max-terms 5");
  CHECK(r.code == 3);
  const Parsed csv = parse_csv(r.out);  // output still written
  REQUIRE(csv.rows.size() == 1);
  CHECK(csv.rows[0][3] == 0.0);
}

TEST_CASE("cli-level input errors") {
  CHECK(run_cli("").code == 2);                    // missing subcommand
  CHECK(run_cli("frobnicate").code == 2);          // unknown subcommand
  CHECK(run_cli("ml --rho 1").code == 2);          // missing required flags
  CHECK(run_cli("ml --rho 1 --alpha 1 --gamma 1 --z 1 --bogus").code == 2);
}

TEST_CASE("op: power selector uses the closed form") {
  const std::string spec = work_dir() + "/op_identity.json";
  put_file(spec, R"({"rho": 1.0, "alpha": 1.0, "gamma": 0.0, "omega": 0.0,
                     "psi": {"kind": "identity"}, "interval": [0, 1]})");
  const RunResult r =
      run_cli("op --spec " + spec + " --power 1 --x 0:1:0.25");
  CHECK(r.code == 0);
  const Parsed csv = parse_csv(r.out);
  CHECK(csv.header == "x,value");
  REQUIRE(csv.rows.size() == 5);
  // integral of order 1 of the constant 1 is x itself
  for (const auto& row : csv.rows) {
    CHECK(std::abs(row[1] - row[0]) < 1e-14);
  }
}

TEST_CASE("op: sampled input matches the library call bit for bit") {
  const std::string spec = work_dir() + "/op_full.json";
  put_file(spec, R"({"rho": 1.0, "alpha": 0.5, "gamma": 1.0, "omega": 0.3,
                     "psi": {"kind": "identity"}, "interval": [0, 1]})");
  const prabhakar::PsiMap psi = prabhakar::PsiMap::identity({0.0, 1.0});
  const prabhakar::SampledFunction f = prabhakar::sample_uniform_s(
      psi, [](double t) { return std::cos(t); }, 101);
  const std::string data = work_dir() + "/f.csv";
  prabhakar::write_file(data,
                        prabhakar::to_csv({"x,f", {f.nodes, f.values}}));

  const RunResult r =
      run_cli("op --spec " + spec + " --f-csv " + data + " --x 0:1:0.25");
  CHECK(r.code == 0);
  const Parsed csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 5);

  const prabhakar::OperatorSpec op(prabhakar::MLParams(1.0, 0.5, 1.0, 0.3),
                                   psi);
  const prabhakar::SampledFunction back = prabhakar::read_xy_csv(data);
  for (const auto& row : csv.rows) {
    CHECK(row[1] == prabhakar::prabhakar_apply(op, back, row[0]));
  }
}

TEST_CASE("op: builtin function with output file") {
  const std::string spec = work_dir() + "/op_full2.json";
  put_file(spec, R"({"rho": 1.0, "alpha": 0.5, "gamma": 1.0, "omega": 0.3,
                     "psi": {"kind": "identity"}, "interval": [0, 1]})");
  const std::string out = work_dir() + "/op_out.csv";
  const RunResult r = run_cli("op --spec " + spec +
                              " --f cos-psi --x 0.5 --nodes 200 -o " + out);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const Parsed csv = parse_csv(slurp(out));
  REQUIRE(csv.rows.size() == 1);
  CHECK(csv.rows[0][1] > 0.0);
  CHECK(run_cli("op --spec " + spec + " --f no-such --x 0.5").code == 2);
  CHECK(run_cli("op --spec " + spec + " --x 0.5").code == 2);  // no selector
}

TEST_CASE("solve: trivial problem is constant by both methods") {
  const std::string prob = work_dir() + "/trivial.json";
  put_file(prob, R"({"beta": 0.7, "lambda": 0.0,
                     "op": {"rho": 1.0, "alpha": 0.5, "gamma": 1.0,
                            "omega": 0.3},
                     "psi": {"kind": "identity"}, "interval": [0, 1],
                     "b": [1.0], "forcing": {"type": "zero"}})");
  const RunResult r = run_cli("solve --problem " + prob + " --points 5");
  CHECK(r.code == 0);
  const Parsed csv = parse_csv(r.out);
  CHECK(csv.header == "x,u_series,u_volterra,abs_diff");
  REQUIRE(csv.rows.size() == 5);
  for (const auto& row : csv.rows) {
    CHECK(std::abs(row[1] - 1.0) < 1e-12);
    CHECK(std::abs(row[2] - 1.0) < 1e-12);
    CHECK(row[3] < 1e-12);
  }
}

TEST_CASE("solve: two initial values with zero coupling") {
  const std::string prob = work_dir() + "/linear.json";
  put_file(prob, R"({"beta": 1.5, "lambda": 0.0,
                     "op": {"rho": 1.0, "alpha": 0.5, "gamma": 1.0,
                            "omega": 0.3},
                     "psi": {"kind": "identity"}, "interval": [0, 1],
                     "b": [1.0, 2.0], "forcing": {"type": "zero"}})");
  const RunResult r =
      run_cli("solve --problem " + prob + " --method series --x 0:1:0.5");
  CHECK(r.code == 0);
  const Parsed csv = parse_csv(r.out);
  CHECK(csv.header == "x,u_series");
  REQUIRE(csv.rows.size() == 3);
  for (const auto& row : csv.rows) {
    CHECK(std::abs(row[1] - (1.0 + 2.0 * row[0])) < 1e-12);
  }
}

TEST_CASE("solve: cross-validated reference instance") {
  const std::string prob = work_dir() + "/base.json";
  put_file(prob, kBaseProblem);
  const std::string report = work_dir() + "/solve_report.json";
  const RunResult r = run_cli("solve --problem " + prob +
                              " --points 9 --report " + report);
  CHECK(r.code == 0);
  const Parsed csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 9);
  // last row is x = 1
  CHECK(std::abs(csv.rows.back()[1] - 2.955589665929048663011854) < 1e-9);
  CHECK(std::abs(csv.rows.back()[3]) < 1e-3);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j["series"]["converged"] == true);
  CHECK(j["volterra"]["quadrature"]["converged"] == true);
  CHECK(j["cross"]["max_rel_diff"].get<double>() < 1e-3);
}

TEST_CASE("solve: volterra-only column layout") {
  const std::string prob = work_dir() + "/base2.json";
  put_file(prob, kBaseProblem);
  const RunResult r = run_cli("solve --problem " + prob +
                              " --method volterra --points 3 --nodes 200");
  CHECK(r.code == 0);
  CHECK(parse_csv(r.out).header == "x,u_volterra");
}

TEST_CASE("solve: cross-check failure exits 4") {
  const std::string prob = work_dir() + "/base3.json";
  put_file(prob, kBaseProblem);
  const RunResult r = run_cli("solve --problem " + prob +
                              " --points 5 --nodes 16 --cross-tol 1e-9");
  CHECK(r.code == 4);
  CHECK(!r.err.empty());
}

TEST_CASE("solve: input errors exit 2") {
  CHECK(run_cli("solve --problem /nonexistent.json").code == 2);
  const std::string prob = work_dir() + "/bad.json";
  put_file(prob, "{\"beta\": 0.7}");
  CHECK(run_cli("solve --problem " + prob).code == 2);
  const std::string ok = work_dir() + "/base4.json";
  put_file(ok, kBaseProblem);
  CHECK(run_cli("solve --problem " + ok + " --method sideways").code == 2);
  CHECK(run_cli("solve --problem " + ok + " --x 0:2:0.5").code == 2);
}

TEST_CASE("verify: passing suite, list, and report") {
  const std::string report = work_dir() + "/verify_report.json";
  const RunResult r =
      run_cli("verify --suite reduction --seed 3 --report " + report);
  CHECK(r.code == 0);
  CHECK(r.out.find("pass") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j["suite"] == "reduction");
  CHECK(j["failures"] == 0);
  CHECK(j["properties"].is_array());
  CHECK(!j["properties"].empty());

  const RunResult l = run_cli("verify --list-suites");
  CHECK(l.code == 0);
  CHECK(l.out.find("semigroup") != std::string::npos);

  CHECK(run_cli("verify --suite nonesuch").code == 2);
}
