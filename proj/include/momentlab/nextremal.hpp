#pragma once

#include <string>
#include <vector>

#include "momentlab/jacobi.hpp"

namespace momentlab {

/// Which real function of u is scanned for zeros.
///   A, B, D : u -> A(u, v0), B(u, v0), D(u, v0), anchor = v0
///   BtD     : u -> B(u) + t D(u), anchor = t (t = +inf means D(u))
enum class ZeroTarget { A, B, D, BtD };

std::string to_string(ZeroTarget which);
ZeroTarget parse_zero_target(const std::string& text);

struct Window {
  double lo = -8.0;
  double hi = 8.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

struct SupportSet {
  ZeroTarget which = ZeroTarget::D;
  double anchor = 0.0;
  Window window;
  std::vector<double> points;  // strictly increasing
  double refinement_tol = 0.0;
};

/// N-extremal measure mu_t restricted to a window. t = +inf encodes t = infinity.
struct DiscreteMeasure {
  double t = 0.0;
  SupportSet support;
  std::vector<double> masses;  // 1/||p_u||^2, aligned with support.points
  double captured_mass = 0.0;
};

struct TargetSample {
  double value = 0.0;
  double scale = 1.0;  // magnitude of the summands behind `value`
};

TargetSample eval_target(const JacobiModel& model, ZeroTarget which, double anchor, double u,
                         const Settings& settings);

/// Eigenvalues of the (N+1)x(N+1) truncated Jacobi matrix (zeros of p_{N+1}),
/// with N grown until the spectrum covers the window. Target A uses J^(1).
std::vector<double> eigen_seeds(const JacobiModel& model, ZeroTarget which, const Window& window);

/// All seeds of the scan: eigenvalue seeds, the fallback grid and the window edges.
std::vector<double> scan_grid(const JacobiModel& model, ZeroTarget which, const Window& window,
                              const Settings& settings);

SupportSet find_zeros(const JacobiModel& model, ZeroTarget which, double anchor,
                      const Window& window, const Settings& settings);

DiscreteMeasure measure_for_t(const JacobiModel& model, double t, const Window& window,
                              const Settings& settings);

/// t = -B(x0)/D(x0), or +inf when D(x0) vanishes.
double parameter_for_point(const JacobiModel& model, double x0, const Settings& settings);

DiscreteMeasure measure_for_point(const JacobiModel& model, double x0, const Window& window,
                                  const Settings& settings);

/// Chordal distance on R u {inf}; 0 iff t1 == t2.
double parameter_distance(double t1, double t2);

struct StieltjesResult {
  Complex lhs;
  Complex rhs;
  double residual = 0.0;
  double tail_bound = 0.0;  // (1 - captured_mass) / |Im z|
};

/// Compares sum mass/(x - z) with -(A(z) + tC(z)) / (B(z) + tD(z)).
StieltjesResult stieltjes_check(const JacobiModel& model, const DiscreteMeasure& measure,
                                Complex z, const Settings& settings);

struct MomentAtZero {
  double value = 0.0;  // sum mass / x
  double residual = 0.0;
  double tail_bound = 0.0;
};

MomentAtZero moment_at_zero(const DiscreteMeasure& measure, const Settings& settings);

struct InterlacingVerdict {
  bool alternating = false;
  std::size_t compared = 0;
  std::string detail;
};

InterlacingVerdict interlacing_check(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

struct SeedCheck {
  std::size_t gaps = 0;
  std::size_t gaps_with_seed = 0;
};

/// Counts gaps between consecutive support points that contain an eigenvalue seed.
SeedCheck seed_interlacing(const JacobiModel& model, const SupportSet& support);

}  // namespace momentlab
