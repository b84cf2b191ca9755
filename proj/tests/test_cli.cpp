#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout only when asked.
Run cli(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string("env -u MOMENTLAB_CACHE '") + MOMENTLAB_CLI + "' " + args;
  cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int st = ::pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("momentlab_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("eval") {
  const Run r = cli("eval --z 0 --n 2");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 3);
  CHECK(j["rows"][0]["p"].get<double>() == 1.0);
  CHECK(j["rows"][1]["q"].get<double>() == 1.0);
  CHECK(j["rows"][2]["p"].get<double>() == -0.5);

  const Run csv = cli("--format csv eval --z 1 --n 0");
  CHECK(csv.status == 0);
  CHECK(csv.out == "n,p,q\n0,1,0\n");

  const Run cplx = cli("eval --z 1+2i --n 1");
  REQUIRE(cplx.status == 0);
  CHECK(json::parse(cplx.out)["rows"][1]["p"][1].get<double>() == 2.0);
}

TEST_CASE("nevanlinna on the diagonal") {
  const Run r = cli("nevanlinna --u 1 --v 1");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["A"].get<double>() == 0.0);
  CHECK(j["B"].get<double>() == -1.0);
  CHECK(j["C"].get<double>() == 1.0);
  CHECK(j["D"].get<double>() == 0.0);
}

TEST_CASE("exit codes") {
  CHECK(cli("--model /nonexistent/model.csv nevanlinna --u 1").status == 2);
  CHECK(cli("verify --suite bogus").status == 2);
  CHECK(cli("--ratio 1 nevanlinna --u 1").status == 2);
  CHECK(cli("frobnicate").status == 2);
  CHECK(cli("density --kind Z").status == 2);

  const Run v = cli("verify --suite identities");
  CHECK(v.status == 0);
  CHECK(v.out.find("[FAIL]") == std::string::npos);
  CHECK(v.out.find("checks passed") != std::string::npos);
}

TEST_CASE("model file errors name the line") {
  const fs::path dir = scratch("model");
  std::ofstream(dir / "neg.csv") << "n,a,b\n0,1,0\n1,-2,0\n";
  const Run r = cli("--model " + (dir / "neg.csv").string() + " nevanlinna --u 1", true);
  CHECK(r.status == 2);
  CHECK(r.out.find("line 3") != std::string::npos);
  CHECK(r.out.find("a_n must be positive") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("support and measure") {
  const Run s = cli("support --which D --anchor 0 --window=-0.1,0.1");
  REQUIRE(s.status == 0);
  const json j = json::parse(s.out);
  REQUIRE(j["points"].size() == 1);
  CHECK(std::abs(j["points"][0].get<double>()) <= 1e-12);

  const Run m = cli("measure --t inf --window=-8,8");
  REQUIRE(m.status == 0);
  const json mj = json::parse(m.out);
  CHECK(mj["t"] == "inf");
  CHECK(mj["captured_mass"].get<double>() > 0.999);

  const Run p = cli("measure --x0 0 --window=-8,8");
  REQUIRE(p.status == 0);
  CHECK(json::parse(p.out)["t"] == "inf");
}

TEST_CASE("density") {
  const Run r = cli("density --kind P --v0 0 --m-max 6 --drop-member 1 --target nearest");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  for (const auto& x : j["residuals"]["nearest"]) CHECK(std::abs(x.get<double>() - 1.0) <= 1e-8);

  const Run m = cli("density --kind M --v0 0.5 --m-max 6 --target e0");
  REQUIRE(m.status == 0);
  const json mj = json::parse(m.out);
  CHECK(mj["family"]["branch"] == "C(v0)!=0");
  CHECK(mj["family"]["t0"].get<double>() == doctest::Approx(-0.719051).epsilon(1e-5));
}

TEST_CASE("config file and flag precedence") {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "run.cfg") << "# geometric with ratio 3\nratio = 3\nformat = csv\n";
  const Run r = cli("--config " + (dir / "run.cfg").string() + " eval --z 0 --n 1");
  REQUIRE(r.status == 0);
  CHECK(r.out == "n,p,q\n0,1,0\n1,0,1\n");
  const Run over = cli("--config " + (dir / "run.cfg").string() + " --format json eval --z 0 --n 1");
  REQUIRE(over.status == 0);
  CHECK(over.out.front() == '{');
  std::ofstream(dir / "bad.cfg") << "colour = blue\n";
  CHECK(cli("--config " + (dir / "bad.cfg").string() + " eval --z 0 --n 1").status == 2);
  fs::remove_all(dir);
}

TEST_CASE("cache reuse is byte-identical") {
  const fs::path dir = scratch("cache");
  const std::string env = "MOMENTLAB_CACHE='" + dir.string() + "' '" + MOMENTLAB_CLI + "' ";
  auto run = [&](const std::string& args) {
    Run r;
    FILE* pipe = ::popen((env + args + " 2>/dev/null").c_str(), "r");
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    r.status = WEXITSTATUS(::pclose(pipe));
    return r;
  };
  const Run a = run("measure --t 0 --window=-8,8");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.path().extension() == ".json";
  CHECK(files == 1);
  const Run b = run("measure --t 0 --window=-8,8");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == cli("measure --t 0 --window=-8,8").out);
  fs::remove_all(dir);
}

TEST_CASE("output file") {
  const fs::path dir = scratch("out");
  const Run r = cli("--out " + (dir / "e.json").string() + " eval --z 0 --n 1");
  CHECK(r.status == 0);
  std::ifstream in(dir / "e.json");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(json::parse(text)["rows"].size() == 2);
  fs::remove_all(dir);
}
