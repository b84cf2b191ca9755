#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/models_io.hpp"
#include "momentlab/nextremal.hpp"
#include "momentlab/serialize.hpp"

using namespace momentlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("momentlab_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string message_of(const std::string& csv) {
  try {
    parse_model_csv(csv, "t");
  } catch (const ModelFormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("table model matches the builtin where defined") {
  const JacobiModel t = parse_model_csv("n,a,b\n0,1,0\n1,2,0\n2,4,0\n", "mini");
  const JacobiModel g = builtin_geometric();
  CHECK(t.max_index() == 2);
  for (std::size_t n = 0; n <= 2; ++n) {
    const double x = t.coeff(n).a, y = g.coeff(n).a;
    CHECK(std::memcmp(&x, &y, sizeof(double)) == 0);
    CHECK(t.coeff(n).b == g.coeff(n).b);
  }
  CHECK_THROWS_AS(t.coeff(3), UnavailableCoefficient);
  CHECK(t.identity() != g.identity());
  // Same bytes, same identity.
  CHECK(parse_model_csv("n,a,b\n0,1,0\n1,2,0\n2,4,0\n", "other").identity() == t.identity());
}

TEST_CASE("table validation") {
  CHECK(message_of("n,a,b\n0,1,0\n1,-2,0\n") == "line 3: a_n must be positive");
  CHECK(message_of("") == "empty coefficient file");
  CHECK(message_of("n,a,b\n") == "coefficient file has no rows");
  CHECK(message_of("n,a,b\n0,1,0\n2,4,0\n").find("gap in indices") != std::string::npos);
  CHECK(message_of("n,a,b\n0,1,0\n0,4,0\n").find("duplicate index") != std::string::npos);
  CHECK(message_of("n,a,b\n0,1\n").find("expected 3 fields") != std::string::npos);
  CHECK(message_of("n,a,b\n0,x,0\n").find("line 2") == 0);
  CHECK(message_of("x,y\n0,1,0\n").find("header") != std::string::npos);
  CHECK(message_of("n,a,b\n0,1,0\n\n1,2,0\n").empty());
}

TEST_CASE("model files") {
  const fs::path dir = scratch_dir("models");
  std::ofstream(dir / "tiny.csv") << "n,a,b\n0,1,0.5\n1,3,0\n";
  const JacobiModel m = load_model(dir / "tiny.csv");
  CHECK(m.name() == "tiny");
  CHECK(m.coeff(0).b == 0.5);
  std::ofstream(dir / "bad.csv") << "n,a,b\n0,0,0\n";
  try {
    load_model(dir / "bad.csv");
    FAIL("expected an error");
  } catch (const ModelFormatError& e) {
    CHECK(std::string(e.what()).find("bad.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(load_model(dir / "missing.csv"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("builtin geometric family") {
  const JacobiModel g = builtin_geometric();
  CHECK(g.name() == "geometric2");
  CHECK(g.coeff(10).a == 1024.0);
  CHECK_THROWS_AS(builtin_geometric(1.0), ConfigError);
  CHECK_THROWS_AS(builtin_geometric(2.0, -1.0), ConfigError);
  const JacobiModel g3 = builtin_geometric(3.0);
  CHECK(g3.coeff(2).a == 9.0);
  CHECK(indeterminacy_check(g3, Settings{}).indeterminate);
}

TEST_CASE("hashing") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  RunManifest a{builtin_geometric().identity(), Settings{}, {-8, 8}, "measure t=0", {"measure.json"}};
  RunManifest b = a;
  CHECK(a.hash() == b.hash());
  b.settings.tol_det = 1e-10;
  CHECK(a.hash() != b.hash());
  b = a;
  b.window.hi = 9;
  CHECK(a.hash() != b.hash());
  b = a;
  b.command = "measure t=1";
  CHECK(a.hash() != b.hash());
}

TEST_CASE("artifact cache") {
  const fs::path dir = scratch_dir("cache");
  ArtifactCache cache(dir);
  RunManifest m{builtin_geometric().identity(), Settings{}, {-8, 8}, "measure t=0", {"measure.json"}};
  CHECK(!cache.load(m));
  const std::string bytes = measure_json(measure_for_t(builtin_geometric(), 0.0, {-8, 8}, Settings{}));
  cache.store(m, bytes);
  const auto hit = cache.load(m);
  REQUIRE(hit);
  CHECK(*hit == bytes);

  // Corrupt the entry: a miss, not a wrong answer.
  std::ofstream(cache.entry_path(m), std::ios::app) << "x";
  CHECK(!cache.load(m));
  fs::remove_all(dir);
}

TEST_CASE("measure JSON round trip") {
  const DiscreteMeasure mu =
      measure_for_t(builtin_geometric(), std::numeric_limits<double>::infinity(), {-64, 64}, Settings{});
  const std::string text = measure_json(mu);
  const DiscreteMeasure back = parse_measure_json(text);
  CHECK(std::isinf(back.t));
  CHECK(back.support.points == mu.support.points);
  CHECK(back.masses == mu.masses);
  CHECK(back.captured_mass == mu.captured_mass);
  CHECK(measure_json(back) == text);
  CHECK(text.find("\"inf\"") != std::string::npos);
  CHECK_THROWS_AS(parse_measure_json("{\"t\": 0}"), ConfigError);
}

TEST_CASE("JSON layout") {
  const DiscreteMeasure mu = measure_for_t(builtin_geometric(), 0.0, {-8, 8}, Settings{});
  const auto j = nlohmann::ordered_json::parse(measure_json(mu));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"t", "window", "points", "masses", "captured_mass"});
  // Numbers round-trip exactly.
  for (std::size_t i = 0; i < mu.masses.size(); ++i) CHECK(j["masses"][i].get<double>() == mu.masses[i]);
  const std::string csv = measure_csv(mu);
  CHECK(csv.rfind("x,mass\n", 0) == 0);
}
