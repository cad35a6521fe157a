#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "memf/cli.hpp"
#include "memf/energy.hpp"

using namespace memf;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Strips the wall_time_ms line, the only nondeterministic part of a report.
std::string without_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, result;
  while (std::getline(in, line)) {
    if (line.rfind("wall_time_ms=", 0) != 0) result += line + "\n";
  }
  return result;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/memf_cli_test_") + name;
}

}  // namespace

TEST_CASE("verify mode runs every solver and agrees") {
  CliResult r = cli({"--gen", "grid", "3x3", "--labels", "3", "--reg", "quadratic", "--seed",
                     "1", "--solver", "block", "--verify"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("verify=ok") != std::string::npos);
  CHECK(r.out.find("solver=block") != std::string::npos);
}

TEST_CASE("oversized brute force is a capacity error") {
  CliResult r = cli({"--gen", "grid", "5x4", "--labels", "3", "--solver", "bruteforce"});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("cap") != std::string::npos);
}

TEST_CASE("reports are deterministic apart from wall time") {
  std::vector<std::string> args = {"--gen",  "grid", "6x5", "--labels", "5",
                                   "--reg",  "huber", "--huber-delta", "2",
                                   "--seed", "9",    "--solver", "poly"};
  CliResult a = cli(args);
  CliResult b = cli(args);
  CHECK(a.exit_code == 0);
  CHECK(without_time(a.out) == without_time(b.out));
  CHECK(a.out.find("energy=") != std::string::npos);
  CHECK(a.out.find("labeling=") != std::string::npos);
}

TEST_CASE("labeling is written as a binary PGM") {
  std::string pgm_path = temp_path("label.pgm");
  CliResult r = cli({"--gen", "grid", "4x3", "--labels", "4", "--seed", "2", "--solver",
                     "block", "--labeling-out", pgm_path});
  CHECK(r.exit_code == 0);
  std::ifstream pgm(pgm_path, std::ios::binary);
  REQUIRE(pgm.good());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  pgm >> magic >> w >> h >> maxval;
  CHECK(magic == "P5");
  CHECK(w == 4);
  CHECK(h == 3);
  CHECK(maxval == 255);
  pgm.get();  // single whitespace after the header
  std::string pixels((std::istreambuf_iterator<char>(pgm)), std::istreambuf_iterator<char>());
  CHECK(pixels.size() == 12);
  std::remove(pgm_path.c_str());
}

TEST_CASE("pgm scaling maps the top label to 255") {
  Labeling x = {0, 1, 2, 3};
  std::ostringstream out;
  write_pgm(out, x, 4, 1, 4);
  std::string data = out.str();
  std::string body = data.substr(data.rfind('\n') + 1);
  REQUIRE(body.size() == 4);
  CHECK(static_cast<unsigned char>(body[0]) == 0);
  CHECK(static_cast<unsigned char>(body[1]) == 85);
  CHECK(static_cast<unsigned char>(body[2]) == 170);
  CHECK(static_cast<unsigned char>(body[3]) == 255);
}

TEST_CASE("report files match stdout") {
  std::string report_path = temp_path("report.txt");
  CliResult r = cli({"--gen", "grid", "3x3", "--labels", "3", "--seed", "4", "--solver",
                     "reference", "--report-out", report_path});
  CHECK(r.exit_code == 0);
  std::ifstream in(report_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str() == r.out);
  std::remove(report_path.c_str());
}

TEST_CASE("instance files round through the cli") {
  std::string instance_path = temp_path("instance.mrf");
  {
    std::ofstream f(instance_path);
    f << "mrf 2 1 3\n"
      << "unary 0 5 0 5\n"
      << "unary 1 0 5 5\n"
      << "edge 0 1 fn 1 linear\n";
  }
  CliResult r = cli({"--input", instance_path, "--solver", "block", "--verify"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("energy=1") != std::string::npos);
  std::remove(instance_path.c_str());
}

TEST_CASE("scale multiplies every potential") {
  std::string instance_path = temp_path("scale.mrf");
  {
    std::ofstream f(instance_path);
    f << "mrf 2 1 2\nunary 0 0 3\nunary 1 2 0\nedge 0 1 fn 2 linear\n";
  }
  CliResult r1 = cli({"--input", instance_path, "--solver", "bruteforce"});
  CliResult r7 = cli({"--input", instance_path, "--scale", "7", "--solver", "bruteforce"});
  CHECK(r1.out.find("energy=2\n") != std::string::npos);
  CHECK(r7.out.find("energy=14\n") != std::string::npos);
  std::remove(instance_path.c_str());
}

TEST_CASE("compare mode") {
  SUBCASE("a single solver is a usage error") {
    CliResult r = cli({"--gen", "grid", "3x3", "--labels", "3", "--solvers", "block"});
    CHECK(r.exit_code == 1);
  }
  SUBCASE("agreement across seeded instances") {
    CliResult r = cli({"--gen", "grid", "4x4", "--labels", "4", "--seed", "0", "--instances",
                       "3", "--solvers", "reference,poly,block"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("block_wins=") != std::string::npos);
    CHECK(r.out.find("aug_ratio_median=") != std::string::npos);
    CliResult again = cli({"--gen", "grid", "4x4", "--labels", "4", "--seed", "0", "--instances",
                           "3", "--solvers", "reference,poly,block"});
    // Identical command lines give identical tables up to timing columns.
    CHECK(r.exit_code == again.exit_code);
  }
  SUBCASE("diagnostics add path-length statistics") {
    CliResult r = cli({"--gen", "grid", "4x4", "--labels", "4", "--seed", "1", "--solvers",
                       "reference,block", "--diagnostics"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("block_path_length_median=") != std::string::npos);
  }
}

TEST_CASE("usage errors") {
  CliResult none = cli({"--labels", "3"});
  CHECK(none.exit_code == 1);
  CliResult both = cli({"--gen", "grid", "2x2", "--input", "/nonexistent"});
  CHECK(both.exit_code == 1);
  CliResult badsolver = cli({"--gen", "grid", "2x2", "--labels", "2", "--solver", "magic"});
  CHECK(badsolver.exit_code == 1);
}
