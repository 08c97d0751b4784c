#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(SPARSEBOUND_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "sparsebound_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

}  // namespace

TEST_CASE("cli gen writes the expected matrix file") {
  std::string out = (scratch_dir() / "atilde.txt").string();
  RunResult r = run("gen --kind atilde --d 2 --primes 2,3 --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(slurp(out) == "1 3\n3 2 -6\n");
  CHECK(r.output.find("frobenius=1") != std::string::npos);
}

TEST_CASE("cli analyze prints bounds") {
  std::string m = write_file("stacked.txt", "2 4\n1 0 0 0\n0 3 2 -6\n");
  RunResult r = run("analyze --matrix " + m);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("delta {2,3,6}") != std::string::npos);
  CHECK(r.output.find("bound_mode_i 4") != std::string::npos);
  CHECK(r.output.find("bound_mode_ii 5") != std::string::npos);

  std::string id = write_file("id2.txt", "2 2\n1 0\n0 1\n");
  RunResult rid = run("analyze --matrix " + id);
  CHECK(rid.output.find("bound_mode_i 2") != std::string::npos);
  CHECK(rid.output.find("bound_mode_ii 4") != std::string::npos);
}

TEST_CASE("cli analyze surfaces parse and rank errors") {
  std::string bad = write_file("bad.txt", "2 2\n1 2\nx 4\n");
  RunResult r = run("analyze --matrix " + bad);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("line 3") != std::string::npos);

  std::string rank = write_file("rank.txt", "2 2\n1 2\n2 4\n");
  RunResult rr = run("analyze --matrix " + rank);
  CHECK(rr.exit_code == 3);
  CHECK(rr.output.find("matrix not full row rank") != std::string::npos);
}

TEST_CASE("cli solve exit codes and verify round trip") {
  std::string id = write_file("id2b.txt", "2 2\n1 0\n0 1\n");
  std::string cert = (scratch_dir() / "cert.txt").string();
  RunResult ok = run("solve --matrix " + id + " --b 3,7 --out " + cert);
  CHECK(ok.exit_code == 0);
  CHECK(slurp(cert).find("certificate") != std::string::npos);

  RunResult ver = run("verify --matrix " + id + " --certificate " + cert);
  CHECK(ver.exit_code == 0);
  CHECK(ver.output.find("verify pass") != std::string::npos);

  // Tamper with one coefficient.
  std::string tampered = slurp(cert);
  auto pos = tampered.find("x 0:3");
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos, 5, "x 0:4");
  std::string bad = write_file("cert_bad.txt", tampered);
  RunResult verbad = run("verify --matrix " + id + " --certificate " + bad);
  CHECK(verbad.exit_code != 0);
  CHECK(verbad.output.find("verify fail") != std::string::npos);

  std::string even = write_file("even.txt", "1 2\n2 4\n");
  CHECK(run("solve --matrix " + even + " --b 3").exit_code == 1);

  std::string stacked = write_file("stacked2.txt", "2 4\n1 0 0 0\n0 3 2 -6\n");
  CHECK(run("solve --matrix " + stacked + " --b 5,2").exit_code == 2);
  CHECK(run("solve --matrix " + stacked + " --b 5,12").exit_code == 0);
}

TEST_CASE("cli solve output always passes cli verify") {
  std::string stacked = write_file("stacked_rt.txt", "2 4\n1 0 0 0\n0 3 2 -6\n");
  int certified = 0;
  for (std::string b : {"0,0", "3,7", "5,12", "2,-6", "7,0", "1,13", "4,-12"}) {
    std::string cert = (scratch_dir() / ("rt_" + std::to_string(certified) + ".txt")).string();
    RunResult s = run("solve --matrix " + stacked + " --b " + b + " --out " + cert);
    if (s.exit_code != 0) continue;  // infeasible or uncovered
    ++certified;
    RunResult v = run("verify --matrix " + stacked + " --certificate " + cert);
    CHECK(v.exit_code == 0);
  }
  CHECK(certified >= 4);
}

TEST_CASE("cli sigma") {
  std::string at = write_file("atilde2.txt", "1 3\n3 2 -6\n");
  RunResult r = run("sigma --matrix " + at + " --b -5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sigma 3") != std::string::npos);

  std::string even = write_file("even2.txt", "1 2\n2 4\n");
  RunResult inf = run("sigma --matrix " + even + " --b 3");
  CHECK(inf.output.find("sigma infinite") != std::string::npos);
}

TEST_CASE("cli sweep emits csv with config header and is reproducible") {
  std::string stacked = write_file("stacked3.txt", "2 4\n1 0 0 0\n0 3 2 -6\n");
  std::string out1 = (scratch_dir() / "sweep1.csv").string();
  std::string out2 = (scratch_dir() / "sweep2.csv").string();
  std::string args = "sweep --matrix " + stacked +
                     " --t-schedule 3,6 --k-list 3,4 --seed 5 --out ";
  CHECK(run(args + out1).exit_code == 0);
  CHECK(run(args + out2).exit_code == 0);
  std::string csv = slurp(out1);
  CHECK(csv == slurp(out2));
  CHECK(csv.find("# config command=sweep") != std::string::npos);
  CHECK(csv.find("seed=5") != std::string::npos);
  CHECK(csv.find("t,mode,n_box,n_feasible,n_covered,k,n_sigma_le_k,ratio_num,ratio_den") !=
        std::string::npos);
  CHECK(csv.find("# sigma_asy_estimate") != std::string::npos);

  RunResult records = run("sweep --matrix " + stacked +
                          " --t-schedule 3,6 --k-list 3,4 --format records");
  CHECK(records.exit_code == 0);
  CHECK(records.output.find("cert_le_4=") != std::string::npos);
  CHECK(records.output.find("n_unknown=0") != std::string::npos);
}
