#include <limits>

#include "doctest.h"
#include "momentlab/errors.hpp"
#include "momentlab/models_io.hpp"
#include "momentlab/nevanlinna.hpp"
#include "momentlab/nextremal.hpp"
#include "oracles.hpp"

using namespace momentlab;

namespace {

const JacobiModel g2 = builtin_geometric();
const Settings defaults;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("target parsing") {
  CHECK(parse_zero_target("B+tD") == ZeroTarget::BtD);
  CHECK(parse_zero_target("D") == ZeroTarget::D);
  CHECK_THROWS_AS(parse_zero_target("E"), ConfigError);
  CHECK(to_string(ZeroTarget::BtD) == "B+tD");
}

TEST_CASE("zero of D(., 0) at the origin") {
  const SupportSet s = find_zeros(g2, ZeroTarget::D, 0.0, {-0.1, 0.1}, defaults);
  REQUIRE(s.points.size() == 1);
  CHECK(std::abs(s.points[0]) <= defaults.refinement_tol);
}

TEST_CASE("zeros of D(., 0) match an independent scan") {
  const auto o = oracle::geometric2();
  const auto f = [&](oracle::LD u) { return oracle::nevanlinna(o, {u, 0.0L}, {0.0L, 0.0L}).D.real(); };
  // Offset grid so the origin is not a grid point.
  const auto ref = oracle::zeros(f, -40.0L, 40.0L + 1e-3L, 8001);
  const SupportSet s = find_zeros(g2, ZeroTarget::D, 0.0, {-40, 40}, defaults);
  REQUIRE(s.points.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i)
    CHECK(std::abs(s.points[i] - static_cast<double>(ref[i])) <= 1e-9 * (1 + std::abs(s.points[i])));
}

TEST_CASE("support invariants") {
  for (ZeroTarget which : {ZeroTarget::A, ZeroTarget::B, ZeroTarget::D}) {
    const SupportSet s = find_zeros(g2, which, 0.0, {-40, 40}, defaults);
    for (std::size_t i = 1; i < s.points.size(); ++i)
      CHECK(s.points[i] - s.points[i - 1] > 2 * defaults.refinement_tol);
    // Odd or even target: the zero set is symmetric.
    for (std::size_t i = 0; i < s.points.size(); ++i)
      CHECK(std::abs(s.points[i] + s.points[s.points.size() - 1 - i]) <= 1e-9 * (1 + std::abs(s.points[i])));
    // Zero realness.
    for (double x : s.points) {
      const TargetSample t = eval_target(g2, which, 0.0, x, defaults);
      CHECK(std::abs(t.value) <= 1e-8 * t.scale);
    }
  }
}

TEST_CASE("zeros of B(., 0) interlace zeros of D(., 0)") {
  const SupportSet b = find_zeros(g2, ZeroTarget::B, 0.0, {-40, 40}, defaults);
  const SupportSet d = find_zeros(g2, ZeroTarget::D, 0.0, {-40, 40}, defaults);
  std::vector<std::pair<double, int>> merged;
  for (double x : b.points) merged.push_back({x, 0});
  for (double x : d.points) merged.push_back({x, 1});
  std::sort(merged.begin(), merged.end());
  for (std::size_t i = 1; i < merged.size(); ++i) CHECK(merged[i].second != merged[i - 1].second);
}

TEST_CASE("masses are 1/||p_u||^2") {
  const auto o = oracle::geometric2();
  for (double t : {0.0, 1.0, kInf}) {
    const DiscreteMeasure mu = measure_for_t(g2, t, {-8, 8}, defaults);
    REQUIRE(mu.masses.size() == mu.support.points.size());
    double total = 0.0;
    for (std::size_t i = 0; i < mu.masses.size(); ++i) {
      const double ref = 1.0 / static_cast<double>(oracle::norm2_p(o, mu.support.points[i]));
      CHECK(std::abs(mu.masses[i] * static_cast<double>(oracle::norm2_p(o, mu.support.points[i])) - 1.0) <= 1e-8);
      CHECK(mu.masses[i] == doctest::Approx(ref).epsilon(1e-10));
      total += mu.masses[i];
    }
    CHECK(mu.captured_mass == doctest::Approx(total).epsilon(1e-15));
    CHECK(mu.captured_mass <= 1.0 + 1e-12);
  }
}

TEST_CASE("captured mass grows with the window") {
  for (double t : {0.0, -1.0, kInf}) {
    double previous = 0.0;
    for (double w : {1.0, 2.0, 4.0, 8.0, 64.0, 4096.0}) {
      const DiscreteMeasure mu = measure_for_t(g2, t, {-w, w}, defaults);
      CHECK(mu.captured_mass >= previous - 1e-15);
      previous = mu.captured_mass;
    }
    CHECK(previous >= 1.0 - 1e-12);
  }
  CHECK(measure_for_t(g2, 0.0, {-8, 8}, defaults).captured_mass >= 0.999);
}

TEST_CASE("measure for a point") {
  const DiscreteMeasure m0 = measure_for_point(g2, 0.0, {-8, 8}, defaults);
  CHECK(std::isinf(m0.t));
  CHECK(parameter_for_point(g2, 0.0, defaults) == kInf);

  // Every support point of mu_t yields the same t.
  for (double t : {0.0, 1.0, -1.0, kInf}) {
    const DiscreteMeasure mu = measure_for_t(g2, t, {-8, 8}, defaults);
    for (double x : mu.support.points) CHECK(parameter_distance(parameter_for_point(g2, x, defaults), t) < 1e-6);
  }
  const DiscreteMeasure m1 = measure_for_point(g2, 1.0, {-8, 8}, defaults);
  bool found = false;
  for (double x : m1.support.points) found = found || std::abs(x - 1.0) < 1e-10;
  CHECK(found);
  const NevanlinnaValue nv = nev_one_var(g2, 1.0, defaults);
  CHECK(m1.t == doctest::Approx(-(nv.B / nv.D).real()).epsilon(1e-12));
}

TEST_CASE("parameter distance") {
  CHECK(parameter_distance(kInf, kInf) == 0.0);
  CHECK(parameter_distance(1.0, 1.0) == 0.0);
  CHECK(parameter_distance(1e12, kInf) < 1e-11);
  CHECK(parameter_distance(0.0, kInf) == doctest::Approx(1.0));
}

TEST_CASE("Stieltjes transform and moment at zero") {
  const DiscreteMeasure mu0 = measure_for_t(g2, 0.0, {-64, 64}, defaults);
  CHECK(mu0.captured_mass >= 1.0 - 1e-8);
  CHECK(stieltjes_check(g2, mu0, Complex(0, 1), defaults).residual <= 1e-5);

  for (double t : {1.0, -1.0, 0.25}) {
    const DiscreteMeasure mu = measure_for_t(g2, t, {-64, 64}, defaults);
    const MomentAtZero m = moment_at_zero(mu, defaults);
    CHECK(std::abs(m.value - t) <= 1e-8);
    CHECK(m.residual <= 1e-8);
    CHECK(stieltjes_check(g2, mu, Complex(0.3, 2.0), defaults).residual <= 1e-9);
  }

  // t = inf branch is the limit of the Mobius form.
  const DiscreteMeasure inf = measure_for_t(g2, kInf, {-64, 64}, defaults);
  const StieltjesResult r = stieltjes_check(g2, inf, Complex(0, 2), defaults);
  const NevanlinnaValue nv = nev_one_var(g2, Complex(0, 2), defaults);
  const double big = 1e9;
  const Complex limit = -(nv.A + big * nv.C) / (nv.B + big * nv.D);
  CHECK(std::abs(r.rhs - limit) <= 1e-8);
  CHECK(r.residual <= 1e-10);

  DiscreteMeasure thin = measure_for_t(g2, 0.0, {-0.5, 0.5}, defaults);
  CHECK_THROWS_AS(stieltjes_check(g2, thin, Complex(0, 1), defaults), InsufficientMass);
}

TEST_CASE("interlacing of distinct N-extremal measures") {
  const DiscreteMeasure m0 = measure_for_t(g2, 0.0, {-8, 8}, defaults);
  const DiscreteMeasure mi = measure_for_t(g2, kInf, {-8, 8}, defaults);
  CHECK(interlacing_check(m0, mi).alternating);
  const DiscreteMeasure p = measure_for_t(g2, 1.0, {-8, 8}, defaults);
  const DiscreteMeasure n = measure_for_t(g2, -1.0, {-8, 8}, defaults);
  CHECK(interlacing_check(p, n).alternating);
  CHECK_THROWS_AS(interlacing_check(m0, m0), std::invalid_argument);
}

TEST_CASE("eigenvalue seeds interlace the support") {
  const SupportSet s = find_zeros(g2, ZeroTarget::D, 0.0, {-40, 40}, defaults);
  const SeedCheck c = seed_interlacing(g2, s);
  CHECK(c.gaps == s.points.size() - 1);
  CHECK(c.gaps_with_seed == c.gaps);
  const std::vector<double> seeds = eigen_seeds(g2, ZeroTarget::D, {-40, 40});
  CHECK(std::is_sorted(seeds.begin(), seeds.end()));
}

TEST_CASE("wide windows") {
  const SupportSet s = find_zeros(g2, ZeroTarget::D, 0.0, {-1e12, 1e12}, defaults);
  CHECK(s.points.size() == 41);
  // Zeros hug +-2*4^k for k >= 2.
  for (double x : s.points)
    if (std::abs(x) > 30) {
      const double k = std::round(std::log(std::abs(x) / 2) / std::log(4.0));
      CHECK(std::abs(std::abs(x) - 2 * std::pow(4.0, k)) <= 1e-3 * std::abs(x));
    }
}

TEST_CASE("scan ceiling") {
  Settings tight;
  tight.max_seeds = 100;
  CHECK_THROWS_AS(find_zeros(g2, ZeroTarget::D, 0.0, {-1e12, 1e12}, tight), ScanDensityExceeded);
}
