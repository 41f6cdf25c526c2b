// Command line front end: exit codes, builtin URIs, golden-file stability.

#include "lmhs/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace lmhs;

namespace {

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("validate builtins") {
  auto r = run({"validate", "builtin:conifold?r=2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("valid") == 0);
  auto r2 = run({"validate", "builtin:hashimoto-sano?a=1"});
  CHECK(r2.code == 0);
  CHECK(r2.out.find("kahler: present, globally matching") != std::string::npos);
}

TEST_CASE("malformed file exits 1 with a schema diagnostic") {
  std::string path = "malformed_test.json";
  {
    std::ofstream f(path);
    f << "{ \"schema\": 1, \"name\": \"x\" }";
  }
  auto r = run({"validate", path});
  std::remove(path.c_str());
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);

  auto r2 = run({"validate", "no_such_file.json"});
  CHECK(r2.code == 1);
}

TEST_CASE("distance on the jordan-block builtins") {
  auto r = run({"distance", "builtin:jordan-block?d=1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("distance = infinite") != std::string::npos);
  auto r3 = run({"distance", "builtin:jordan-block?d=3"});
  CHECK(r3.out.find("d = 3") != std::string::npos);
  CHECK(r3.out.find("infinite") != std::string::npos);
  auto r0 = run({"distance", "builtin:jordan-block?d=0"});
  CHECK(r0.out.find("finite-conditional") != std::string::npos);
}

TEST_CASE("verdict commands on the conifold builtin") {
  auto dd = run({"ddbar", "builtin:conifold?r=2"});
  CHECK(dd.code == 0);
  CHECK(dd.out.find("ddbar = holds") != std::string::npos);
  auto pol = run({"polarization", "builtin:conifold?r=2"});
  CHECK(pol.code == 0);
  CHECK(pol.out.find("polarized = true") != std::string::npos);
  auto dist = run({"distance", "builtin:conifold?r=2"});
  CHECK(dist.out.find("d = 0") != std::string::npos);
  CHECK(dist.out.find("distance = finite") != std::string::npos);
}

TEST_CASE("e1 table prints the weight rows") {
  auto r = run({"e1", "builtin:conifold?r=2", "--m", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("w=4") != std::string::npos);
  CHECK(r.out.find("b_3 = 6") != std::string::npos);
}

TEST_CASE("report golden files are byte-stable") {
  setenv("MHS_NO_PARALLEL", "1", 1);
  auto j1 = run({"report", "builtin:conifold?r=2", "--format", "json"});
  auto j2 = run({"report", "builtin:conifold?r=2", "--format", "json"});
  REQUIRE(j1.code == 0);
  CHECK(j1.out == j2.out);
  CHECK(j1.out == slurp(std::string(LMHS_SOURCE_DIR) + "/tests/golden/conifold_r2.json"));
  auto m1 = run({"report", "builtin:conifold?r=2", "--format", "md"});
  CHECK(m1.out == slurp(std::string(LMHS_SOURCE_DIR) + "/tests/golden/conifold_r2.md"));
  unsetenv("MHS_NO_PARALLEL");
}

TEST_CASE("unknown builtin and bad format are rejected") {
  CHECK(run({"ddbar", "builtin:nonsense"}).code == 1);
  CHECK(run({"report", "builtin:conifold?r=2", "--format", "yaml"}).code == 1);
  CHECK(run({"frobnicate", "builtin:conifold?r=2"}).code == 1);
}
