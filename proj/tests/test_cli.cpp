#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nltrefftz/cli.hpp"

namespace fs = std::filesystem;
using nltrefftz::cli::run;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nltrefftz_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int call(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("unknown flags are usage errors and write nothing") {
  const fs::path dir = scratch("badflag");
  std::string err;
  CHECK(call({"trefftz1d", "--out", dir.string(), "--bogus"}, nullptr, &err) == 2);
  CHECK(err.find("usage") != std::string::npos);
  CHECK(!fs::exists(dir));
  CHECK(call({}) == 2);
  CHECK(call({"nosuchcommand"}) == 2);
}

TEST_CASE("config files are strict") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.json") << R"({"sigma": 0.5, "sigmaa": 1})";
    std::ofstream(dir / "good.json") << R"({"n_max": 3, "m": 1})";
  }
  std::string err;
  CHECK(call({"trefftz1d", "--out", (dir / "o1").string(), "--config", (dir / "bad.json").string()}, nullptr, &err) ==
        2);
  CHECK(err.find("sigmaa") != std::string::npos);
  CHECK(!fs::exists(dir / "o1"));
  std::string out;
  CHECK(call({"trefftz1d", "--out", (dir / "o2").string(), "--config", (dir / "good.json").string()}, &out) == 0);
  CHECK(out.find("2 pseudoharmonic functions") != std::string::npos);
  CHECK(call({"trefftz1d", "--out", (dir / "o3").string(), "--config", (dir / "missing.json").string()}) == 2);
}

TEST_CASE("trefftz1d writes csv and metadata") {
  const fs::path dir = scratch("t1");
  REQUIRE(call({"trefftz1d", "--out", dir.string(), "--plot"}) == 0);
  const std::string csv = slurp(dir / "trefftz1d.csv");
  CHECK(csv.rfind("# subcommand=trefftz1d\n", 0) == 0);
  CHECK(csv.find("# preset=paper") != std::string::npos);
  CHECK(csv.find("# apply_conv_in=not-applicable") != std::string::npos);
  CHECK(csv.find("# constraint_indexing=up-to-m") != std::string::npos);
  CHECK(csv.find("x,u0,E0,D0,u1,E1,D1,u2,E2,D2\n") != std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(dir / "trefftz1d.json"));
  CHECK(meta["preset"] == "paper");
  CHECK(meta["switches"]["include_local_term"] == "not-applicable");
  CHECK(meta["trefftz_set"]["coeffs"].size() == 3);
  CHECK(fs::exists(dir / "trefftz1d_u.svg"));
  CHECK(slurp(dir / "trefftz1d_u.svg").find("<svg") != std::string::npos);
}

TEST_CASE("selftest passes") {
  const fs::path dir = scratch("self");
  std::string out;
  CHECK(call({"selftest", "--out", dir.string()}, &out) == 0);
  CHECK(out.find("FAIL") == std::string::npos);
  CHECK(fs::exists(dir / "selftest.csv"));
}

TEST_CASE("converge records its switches") {
  const fs::path dir = scratch("conv");
  REQUIRE(call({"converge", "--out", dir.string(), "--include-local-term"}) == 0);
  const auto meta = nlohmann::json::parse(slurp(dir / "converge.json"));
  CHECK(meta["switches"]["include_local_term"] == "true");
  CHECK(meta["rows"].size() == 5);
  CHECK(slurp(dir / "converge.csv").find("n_max,n_funcs_trefftz,err_trefftz,n_funcs_taylor,err_taylor") !=
        std::string::npos);
}

TEST_CASE("bvp1d single setting") {
  const fs::path dir = scratch("bvp");
  std::string out;
  REQUIRE(call({"bvp1d", "--out", dir.string(), "--variant", "whole-domain", "--apply-conv-in", "everywhere"}, &out) == 0);
  CHECK(fs::exists(dir / "bvp1d_whole-domain_everywhere.csv"));
  CHECK(!fs::exists(dir / "bvp1d_nonlocal-only_everywhere.csv"));
  const auto meta = nlohmann::json::parse(slurp(dir / "bvp1d.json"));
  CHECK(meta["switches"]["apply_conv_in"] == "everywhere");
  CHECK(meta["results"].size() == 1);
  CHECK(call({"bvp1d", "--out", dir.string(), "--variant", "sideways"}) == 2);
}

TEST_CASE("runs are byte-identical") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(call({"interface2d", "--out", a.string()}) == 0);
  REQUIRE(call({"interface2d", "--out", b.string()}) == 0);
  CHECK(slurp(a / "interface2d.csv") == slurp(b / "interface2d.csv"));
  CHECK(slurp(a / "interface2d.json") == slurp(b / "interface2d.json"));
}
