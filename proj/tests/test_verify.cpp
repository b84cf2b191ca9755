#include "doctest.h"
#include "json.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/models_io.hpp"
#include "momentlab/nevanlinna.hpp"
#include "momentlab/serialize.hpp"
#include "momentlab/verify.hpp"

using namespace momentlab;

TEST_CASE("suite names") {
  const auto& names = suite_names();
  CHECK(names == std::vector<std::string>{"identities", "eigenrelation", "measures", "lemma31", "parseval"});
  CHECK_THROWS_AS(run_suite(builtin_geometric(), "nope", Settings{}), ConfigError);
}

TEST_CASE("identity suite passes and is deterministic") {
  const JacobiModel g = builtin_geometric();
  const auto a = run_suite(g, "identities", Settings{});
  const auto b = run_suite(g, "identities", Settings{});
  REQUIRE(a.size() == b.size());
  REQUIRE(!a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK_MESSAGE(a[i].pass, format_check(a[i]));
    CHECK(format_check(a[i]) == format_check(b[i]));
    CHECK(a[i].suite == "identities");
  }
}

TEST_CASE("eigenrelation and measures suites pass") {
  for (const char* suite : {"eigenrelation", "measures"})
    for (const auto& line : run_suite(builtin_geometric(), suite, Settings{})) CHECK_MESSAGE(line.pass, format_check(line));
}

TEST_CASE("check line format") {
  CheckLine upper{"s", "x", 1e-13, 1e-9, false, false, true, ""};
  CHECK(format_check(upper) == "[PASS] s/x: residual 1.000000e-13 <= threshold 1.000000e-09");
  CheckLine lower{"s", "y", 0.5, 0.999, true, false, false, "t=0"};
  CHECK(format_check(lower) == "[FAIL] s/y: value 5.000000e-01 >= threshold 9.990000e-01 (t=0)");
  lower.strict = true;
  CHECK(format_check(lower).find("value 5.000000e-01 > threshold") != std::string::npos);
}

TEST_CASE("uniform stream") {
  UniformStream a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) {
    const double x = a.next(-1, 1);
    CHECK(x == b.next(-1, 1));
    CHECK(x >= -1.0);
    CHECK(x < 1.0);
  }
  CHECK(a.next(0, 1) != c.next(0, 1));
}

TEST_CASE("Nevanlinna JSON") {
  const Settings s;
  const NevanlinnaValue v = nev_series(builtin_geometric(), 1.0, 1.0, s);
  const auto j = nlohmann::ordered_json::parse(nevanlinna_json(v, s));
  std::vector<std::string> keys;
  for (const auto& [k, x] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"u", "v", "A", "B", "C", "D", "n_used", "err_estimate", "det_residual",
                                         "det_threshold", "det_pass"});
  CHECK(j["A"].get<double>() == 0.0);
  CHECK(j["B"].get<double>() == -1.0);
  CHECK(j["det_pass"].get<bool>());

  const NevanlinnaValue w = nev_series(builtin_geometric(), Complex(0, 1), 0.0, s);
  const auto jw = nlohmann::ordered_json::parse(nevanlinna_json(w, s));
  CHECK(jw["u"].is_array());
  CHECK(jw["u"][1].get<double>() == 1.0);
}
