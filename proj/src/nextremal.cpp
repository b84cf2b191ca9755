#include "momentlab/nextremal.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "momentlab/errors.hpp"
#include "momentlab/nevanlinna.hpp"

namespace momentlab {

std::string to_string(ZeroTarget which) {
  switch (which) {
    case ZeroTarget::A: return "A";
    case ZeroTarget::B: return "B";
    case ZeroTarget::D: return "D";
    case ZeroTarget::BtD: return "B+tD";
  }
  return "?";
}

ZeroTarget parse_zero_target(const std::string& text) {
  if (text == "A") return ZeroTarget::A;
  if (text == "B") return ZeroTarget::B;
  if (text == "D") return ZeroTarget::D;
  if (text == "B+tD" || text == "BtD") return ZeroTarget::BtD;
  throw ConfigError("unknown zero target '" + text + "' (expected A, B, D or B+tD)");
}

TargetSample eval_target(const JacobiModel& model, ZeroTarget which, double anchor, double u,
                         const Settings& settings) {
  if (which == ZeroTarget::BtD) {
    const NevanlinnaValue nv = nev_one_var(model, u, settings);
    const double B = nv.B.real(), D = nv.D.real();
    double value;
    if (std::isinf(anchor)) value = D;
    else if (std::abs(anchor) <= 1.0) value = B + anchor * D;
    else value = D + B / anchor;  // same zero set, bounded coefficients
    return {value, nv.scale};
  }
  const NevanlinnaValue nv = nev_series(model, u, anchor, settings);
  switch (which) {
    case ZeroTarget::A: return {nv.A.real(), nv.scale};
    case ZeroTarget::B: return {nv.B.real(), nv.scale};
    default: return {nv.D.real(), nv.scale};
  }
}

std::vector<double> eigen_seeds(const JacobiModel& model, ZeroTarget which, const Window& window) {
  const JacobiModel source = which == ZeroTarget::A ? model.shifted() : model;
  const double reach = std::max(std::abs(window.lo), std::abs(window.hi));
  Eigen::VectorXd eig;
  for (std::size_t size = 16; size <= 1024; size *= 2) {
    Eigen::VectorXd diag(size), sub(size - 1);
    bool complete = true;
    try {
      for (std::size_t n = 0; n < size; ++n) {
        const Coefficients c = source.coeff(n);
        diag(static_cast<Eigen::Index>(n)) = c.b;
        if (n + 1 < size) sub(static_cast<Eigen::Index>(n)) = c.a;
      }
    } catch (const UnavailableCoefficient&) {
      complete = false;
    }
    if (!complete) break;
    if (!diag.allFinite() || !sub.allFinite() || sub.maxCoeff() > 1e150) break;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) break;
    eig = solver.eigenvalues();
    if (eig.cwiseAbs().maxCoeff() > 1.5 * reach) break;
  }
  std::vector<double> out;
  for (Eigen::Index k = 0; k < eig.size(); ++k)
    if (window.contains(eig(k))) out.push_back(eig(k));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void append_uniform(std::vector<double>& out, double lo, double hi, double density) {
  if (!(hi > lo)) return;
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) * density));
  for (std::size_t k = 0; k <= count; ++k)
    out.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count));
}

// Points R * 2^(k / density) in (from, to], both positive.
void append_log(std::vector<double>& out, double from, double to, double density, double sign) {
  if (!(to > from) || from <= 0.0) return;
  const auto count = static_cast<std::size_t>(std::ceil(std::log2(to / from) * density));
  for (std::size_t k = 1; k <= count; ++k) {
    const double x = from * std::exp2(static_cast<double>(k) / density);
    out.push_back(sign * std::min(x, to));
  }
}

}  // namespace

std::vector<double> scan_grid(const JacobiModel& model, ZeroTarget which, const Window& window,
                              const Settings& settings) {
  if (!(window.hi > window.lo) || !std::isfinite(window.lo) || !std::isfinite(window.hi))
    throw ConfigError("zero scan needs a finite, nonempty window");
  std::vector<double> grid = eigen_seeds(model, which, window);
  grid.push_back(window.lo);
  grid.push_back(window.hi);

  const double uniform_points = window.width() * settings.grid_density + 1.0;
  if (uniform_points <= static_cast<double>(settings.max_uniform)) {
    append_uniform(grid, window.lo, window.hi, settings.grid_density);
  } else {
    // Uniform core, log-spaced beyond it.
    const double R = static_cast<double>(settings.max_uniform - 1) / (2.0 * settings.grid_density);
    append_uniform(grid, std::max(window.lo, -R), std::min(window.hi, R), settings.grid_density);
    if (window.hi > R) append_log(grid, std::max(R, window.lo), window.hi, settings.log_density, 1.0);
    if (window.lo < -R) append_log(grid, std::max(R, -window.hi), -window.lo, settings.log_density, -1.0);
  }
  std::erase_if(grid, [&](double x) { return !window.contains(x); });
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() > settings.max_seeds) {
    std::ostringstream msg;
    msg << "zero scan would need " << grid.size() << " seeds (ceiling " << settings.max_seeds
        << "); use a coarser grid density or a narrower window";
    throw ScanDensityExceeded(msg.str());
  }
  return grid;
}

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

double bisect(const JacobiModel& model, ZeroTarget which, double anchor, double lo, double hi,
              int sign_lo, const Settings& settings) {
  for (int iter = 0; iter < 400 && hi - lo > settings.refinement_tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int s = sign_of(eval_target(model, which, anchor, mid, settings).value);
    if (s == 0) return mid;
    if (s == sign_lo) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SupportSet find_zeros(const JacobiModel& model, ZeroTarget which, double anchor,
                      const Window& window, const Settings& settings) {
  std::vector<double> grid = scan_grid(model, which, window, settings);
  std::vector<TargetSample> values;
  values.reserve(grid.size());
  for (double x : grid) values.push_back(eval_target(model, which, anchor, x, settings));

  // A local minimum of |f| without a sign change is either two close zeros the
  // grid stepped over or a double zero. Resample finely to tell them apart.
  std::vector<double> extra;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const int s0 = sign_of(values[i - 1].value), s1 = sign_of(values[i].value),
              s2 = sign_of(values[i + 1].value);
    if (s1 == 0 || s0 != s1 || s1 != s2) continue;
    const double f = std::abs(values[i].value);
    if (f >= std::abs(values[i - 1].value) || f >= std::abs(values[i + 1].value)) continue;
    if (f > 1e-6 * values[i].scale) continue;
    double smallest = f / values[i].scale;
    bool split = false;
    for (int k = 1; k < 128; ++k) {
      const double x = grid[i - 1] + (grid[i + 1] - grid[i - 1]) * k / 128.0;
      const TargetSample sample = eval_target(model, which, anchor, x, settings);
      smallest = std::min(smallest, std::abs(sample.value) / sample.scale);
      if (sign_of(sample.value) != s1) split = true;
      extra.push_back(x);
    }
    if (!split && smallest <= 1e-8) {
      std::ostringstream msg;
      msg << "suspected double zero of " << to_string(which) << " near u = " << grid[i]
          << " (|f|/scale = " << smallest << " without a sign change)";
      throw DegenerateZero(msg.str());
    }
  }
  if (!extra.empty()) {
    for (double x : extra) grid.push_back(x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    values.clear();
    for (double x : grid) values.push_back(eval_target(model, which, anchor, x, settings));
  }

  SupportSet out;
  out.which = which;
  out.anchor = anchor;
  out.window = window;
  out.refinement_tol = settings.refinement_tol;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int s = sign_of(values[i].value);
    if (s == 0) {
      out.points.push_back(grid[i]);
      continue;
    }
    if (i + 1 < grid.size()) {
      const int t = sign_of(values[i + 1].value);
      if (t != 0 && t != s)
        out.points.push_back(bisect(model, which, anchor, grid[i], grid[i + 1], s, settings));
    }
  }
  std::sort(out.points.begin(), out.points.end());
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    if (out.points[i] - out.points[i - 1] < 2.0 * settings.refinement_tol) {
      std::ostringstream msg;
      msg << "zeros " << out.points[i - 1] << " and " << out.points[i]
          << " closer than 2 * refinement_tol";
      throw DegenerateZero(msg.str());
    }
  }
  return out;
}

DiscreteMeasure measure_for_t(const JacobiModel& model, double t, const Window& window,
                              const Settings& settings) {
  DiscreteMeasure m;
  m.t = std::isinf(t) ? std::numeric_limits<double>::infinity() : t;
  m.support = find_zeros(model, ZeroTarget::BtD, m.t, window, settings);
  for (double x : m.support.points) {
    const double nrm = seq_p(model, x, settings).norm();
    const double inv = 1.0 / nrm;
    m.masses.push_back(inv * inv);
  }
  m.captured_mass = 0.0;
  for (double w : m.masses) m.captured_mass += w;
  return m;
}

double parameter_for_point(const JacobiModel& model, double x0, const Settings& settings) {
  const NevanlinnaValue nv = nev_one_var(model, x0, settings);
  const double D = nv.D.real();
  const double B = nv.B.real();
  if (D == 0.0 || std::abs(D) <= 64.0 * std::numeric_limits<double>::epsilon() * nv.scale)
    return std::numeric_limits<double>::infinity();
  return -B / D;
}

DiscreteMeasure measure_for_point(const JacobiModel& model, double x0, const Window& window,
                                  const Settings& settings) {
  const double t = parameter_for_point(model, x0, settings);
  DiscreteMeasure m = measure_for_t(model, t, window, settings);
  const double match = std::max(10.0 * settings.refinement_tol, 1e-10 * (1.0 + std::abs(x0)));
  const bool found = std::any_of(m.support.points.begin(), m.support.points.end(),
                                 [&](double x) { return std::abs(x - x0) <= match; });
  if (window.contains(x0) && !found) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "x0 = " << x0 << " not recovered in the support of mu_t, t = " << t;
    throw ConsistencyError(msg.str());
  }
  return m;
}

double parameter_distance(double t1, double t2) {
  const bool i1 = std::isinf(t1), i2 = std::isinf(t2);
  if (i1 && i2) return 0.0;
  if (i1) return 1.0 / std::sqrt(1.0 + t2 * t2);
  if (i2) return 1.0 / std::sqrt(1.0 + t1 * t1);
  return std::abs(t1 - t2) / std::sqrt((1.0 + t1 * t1) * (1.0 + t2 * t2));
}

namespace {

void require_mass(const DiscreteMeasure& measure, const Settings& settings) {
  if (measure.captured_mass < 1.0 - settings.eps_mass) {
    std::ostringstream msg;
    msg << "captured mass " << measure.captured_mass << " below 1 - eps_mass = "
        << 1.0 - settings.eps_mass << "; widen the window";
    throw InsufficientMass(msg.str());
  }
}

}  // namespace

StieltjesResult stieltjes_check(const JacobiModel& model, const DiscreteMeasure& measure,
                                Complex z, const Settings& settings) {
  if (z.imag() == 0.0) throw std::invalid_argument("stieltjes_check needs nonreal z");
  require_mass(measure, settings);
  StieltjesResult r;
  for (std::size_t k = 0; k < measure.masses.size(); ++k)
    r.lhs += measure.masses[k] / (measure.support.points[k] - z);
  const NevanlinnaValue nv = nev_one_var(model, z, settings);
  const double t = measure.t;
  if (std::isinf(t)) r.rhs = -nv.C / nv.D;
  else if (std::abs(t) <= 1.0) r.rhs = -(nv.A + t * nv.C) / (nv.B + t * nv.D);
  else r.rhs = -(nv.A / t + nv.C) / (nv.B / t + nv.D);
  r.residual = std::abs(r.lhs - r.rhs);
  r.tail_bound = std::max(0.0, 1.0 - measure.captured_mass) / std::abs(z.imag());
  return r;
}

MomentAtZero moment_at_zero(const DiscreteMeasure& measure, const Settings& settings) {
  if (std::isinf(measure.t)) throw std::invalid_argument("moment at zero needs finite t");
  require_mass(measure, settings);
  MomentAtZero r;
  for (std::size_t k = 0; k < measure.masses.size(); ++k) {
    if (measure.support.points[k] == 0.0) throw std::invalid_argument("0 lies in the support");
    r.value += measure.masses[k] / measure.support.points[k];
  }
  r.residual = std::abs(r.value - measure.t);
  const double reach = std::min(std::abs(measure.support.window.lo), std::abs(measure.support.window.hi));
  r.tail_bound = reach > 0.0 ? std::max(0.0, 1.0 - measure.captured_mass) / reach
                             : std::numeric_limits<double>::infinity();
  return r;
}

InterlacingVerdict interlacing_check(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  if (parameter_distance(m1.t, m2.t) == 0.0)
    throw std::invalid_argument("interlacing_check needs two different parameters t");
  struct Tagged {
    double x;
    int owner;
  };
  std::vector<Tagged> merged;
  for (double x : m1.support.points) merged.push_back({x, 1});
  for (double x : m2.support.points) merged.push_back({x, 2});
  std::sort(merged.begin(), merged.end(), [](const Tagged& a, const Tagged& b) {
    return a.x < b.x || (a.x == b.x && a.owner < b.owner);
  });
  InterlacingVerdict v;
  if (merged.size() < 3) {
    v.detail = "fewer than three support points in the window";
    return v;
  }
  // The outermost points sit next to the window edges, where a partner may lie outside.
  v.alternating = true;
  for (std::size_t i = 1; i + 2 < merged.size(); ++i) {
    const Tagged& a = merged[i];
    const Tagged& b = merged[i + 1];
    ++v.compared;
    if (a.owner == b.owner || a.x == b.x) {
      v.alternating = false;
      std::ostringstream msg;
      msg << "points " << a.x << " and " << b.x << " do not alternate";
      v.detail = msg.str();
      return v;
    }
  }
  v.detail = "strictly alternating over " + std::to_string(v.compared) + " interior gaps";
  return v;
}

SeedCheck seed_interlacing(const JacobiModel& model, const SupportSet& support) {
  const std::vector<double> seeds = eigen_seeds(model, support.which, support.window);
  SeedCheck c;
  for (std::size_t i = 1; i < support.points.size(); ++i) {
    ++c.gaps;
    const double lo = support.points[i - 1], hi = support.points[i];
    const bool hit = std::any_of(seeds.begin(), seeds.end(), [&](double s) { return lo < s && s < hi; });
    if (hit) ++c.gaps_with_seed;
  }
  return c;
}

}  // namespace momentlab
