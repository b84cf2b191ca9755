#include "momentlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "momentlab/density.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/nevanlinna.hpp"
#include "momentlab/nextremal.hpp"

namespace momentlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckLine upper(const std::string& suite, const std::string& name, double residual,
                double threshold, const std::string& note = "") {
  return {suite, name, residual, threshold, false, false, residual <= threshold, note};
}

CheckLine lower(const std::string& suite, const std::string& name, double value, double threshold,
                const std::string& note = "") {
  return {suite, name, value, threshold, true, false, value >= threshold, note};
}

CheckLine strictly_above(const std::string& suite, const std::string& name, double value,
                         double threshold, const std::string& note = "") {
  return {suite, name, value, threshold, true, true, value > threshold, note};
}

double rel_diff(Complex x, Complex y) {
  return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
}

std::string t_label(double t) {
  if (std::isinf(t)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

void identities(const JacobiModel& model, const Settings& s, std::vector<CheckLine>& out) {
  const std::string suite = "identities";
  UniformStream rng(20240101);

  double det = 0.0, det_ext = 0.0;
  Settings ext = s;
  ext.precision = Precision::Extended;
  for (int i = 0; i < 100; ++i) {
    const double u = rng.next(-4, 4), v = rng.next(-4, 4);
    det = std::max(det, std::abs(nev_series(model, u, v, s).det_residual()));
    if (i < 20) det_ext = std::max(det_ext, std::abs(nev_series(model, u, v, ext).det_residual()));
  }
  out.push_back(upper(suite, "det_identity", det, s.tol_det, "100 pairs in [-4,4]^2"));
  out.push_back(upper(suite, "det_identity_extended", det_ext, s.tol_det, "20 pairs, extended tier"));

  double complex_det = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Complex u(rng.next(-4, 4), rng.next(-4, 4)), v(rng.next(-4, 4), rng.next(-4, 4));
    const NevanlinnaValue nv = nev_series(model, u, v, s);
    const double size = 1.0 + std::abs(nv.A * nv.D) + std::abs(nv.B * nv.C);
    complex_det = std::max(complex_det, std::abs(nv.det_residual()) / size);
  }
  out.push_back(upper(suite, "det_identity_complex", complex_det, s.tol_det,
                      "20 complex pairs, relative to 1 + |AD| + |BC|"));

  double approx = 0.0, finite_det = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double u = rng.next(-4, 4), v = rng.next(-4, 4);
    for (std::size_t n = 0; n <= 12; ++n) {
      const NevanlinnaValue a = nev_partial(model, u, v, n, s.precision);
      const NevanlinnaValue b = nev_determinant(model, u, v, n, s.precision);
      approx = std::max({approx, rel_diff(a.A, b.A), rel_diff(a.B, b.B), rel_diff(a.C, b.C),
                         rel_diff(a.D, b.D)});
      finite_det = std::max(finite_det, std::abs(a.det_residual()));
    }
  }
  out.push_back(upper(suite, "series_vs_determinant", approx, 1e-10, "n = 0..12, 20 pairs"));
  out.push_back(upper(suite, "det_identity_finite_n", finite_det, s.tol_det, "n = 0..12, 20 pairs"));

  double reduction = 0.0, expansion = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double u = rng.next(-4, 4), v = rng.next(-4, 4), v0 = rng.next(-4, 4);
    const ReductionResiduals r = reduce_two_var(model, u, v, v0, s);
    reduction = std::max(reduction, std::max({r.A, r.B, r.C, r.D}) / r.reduction_scale);
    expansion = std::max(expansion, r.expansion / r.expansion_scale);
  }
  out.push_back(upper(suite, "two_variable_reduction", reduction, 1e-9, "relative, 20 triples"));
  out.push_back(upper(suite, "anchor_expansion", expansion, 1e-9, "relative, 20 triples"));

  double diag = 0.0;
  for (double u : {-3.0, 0.0, 0.5, 2.0}) {
    const NevanlinnaValue d = nev_series(model, u, u, s);
    diag = std::max({diag, std::abs(d.A), std::abs(d.B + 1.0), std::abs(d.C - 1.0), std::abs(d.D)});
  }
  out.push_back(upper(suite, "diagonal_values", diag, 1e-15, "A,B,C,D at u = v is 0,-1,1,0"));
}

// max_n |(Jx)_n - z x_n - shift_n| / local scale over the rows J sees exactly.
double eigen_defect(const JacobiModel& model, const TruncatedVector& x, Complex z, bool q_kind) {
  FiniteVector f{x.entries};
  const FiniteVector Jx = apply_J(model, f);
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < x.entries.size(); ++n) {
    const Coefficients c = model.coeff(n);
    double scale = std::abs(c.b * x.entries[n]) + c.a * std::abs(x.entries[n + 1]) +
                   std::abs(z * x.entries[n]);
    if (n > 0) scale += model.coeff(n - 1).a * std::abs(x.entries[n - 1]);
    const Complex shift = q_kind && n == 0 ? 1.0 : 0.0;
    if (q_kind && n == 0) scale += 1.0;
    const double d = std::abs(Jx.entries[n] - z * x.entries[n] - shift);
    if (scale > 0) worst = std::max(worst, d / scale);
  }
  return worst;
}

void eigenrelation(const JacobiModel& model, const Settings& s, std::vector<CheckLine>& out) {
  const std::string suite = "eigenrelation";
  const std::pair<const char*, Complex> zs[] = {{"0", 0.0}, {"1", 1.0}, {"-2", -2.0}, {"i", Complex(0, 1)}};
  for (const auto& [label, z] : zs) {
    out.push_back(upper(suite, std::string("Jp=zp[z=") + label + "]",
                        eigen_defect(model, seq_p(model, z, s), z, false), 1e-12,
                        "relative to local row scale"));
    out.push_back(upper(suite, std::string("Jq=e0+zq[z=") + label + "]",
                        eigen_defect(model, seq_q(model, z, s), z, true), 1e-12,
                        "relative to local row scale"));
  }

  const double xs[] = {-1.0, -0.5, 0.5, 1.0};
  out.push_back(upper(suite, "shifted_recurrence", q_shift_check(model, 10, xs), 1e-10,
                      "a0 q_{n+1} vs J^(1) polynomials, n <= 10"));

  // Boundary-form membership at the six zeros of D(., 0) nearest 0.
  const SupportSet zeros = find_zeros(model, ZeroTarget::D, 0.0, {-40, 40}, s);
  std::vector<double> nonzero;
  for (double u : zeros.points)
    if (std::abs(u) > 1e-9) nonzero.push_back(u);
  std::stable_sort(nonzero.begin(), nonzero.end(),
                   [](double x, double y) { return std::abs(x) < std::abs(y); });
  if (nonzero.size() > 6) nonzero.resize(6);
  double member_worst = 0.0, alone_weakest = kInf;
  for (double u : nonzero) {
    const std::size_t L = std::max(seq_p(model, u, s).trunc_len(), seq_p(model, 0.0, s).trunc_len());
    const TruncatedVector pu = seq_p(model, u, s, L), p0 = seq_p(model, 0.0, s, L);
    const double B = nev_series(model, u, 0.0, s).B.real();
    const MembershipVerdict in = membership_verdict(model, pu.plus(B, p0), s);
    member_worst = std::max(member_worst,
                            std::max(std::abs(in.omega_p0), std::abs(in.omega_q0)) / in.scale);
    const MembershipVerdict alone = membership_verdict(model, pu, s);
    alone_weakest = std::min(alone_weakest,
                             std::max(std::abs(alone.omega_p0), std::abs(alone.omega_q0)) / alone.scale);
  }
  out.push_back(upper(suite, "member_boundary_form", member_worst, s.tol_omega,
                      "p_u + B(u,0) p_0 at 6 zeros of D(.,0); relative to scale"));
  out.push_back(lower(suite, "nonmember_boundary_form", alone_weakest, 1e-2,
                      "p_u alone at the same zeros; relative to scale"));
}

void measures(const JacobiModel& model, const Settings& s, std::vector<CheckLine>& out) {
  const std::string suite = "measures";
  std::vector<DiscreteMeasure> main;
  for (double t : {0.0, kInf}) {
    double previous = 0.0;
    double drop = 0.0;
    for (double w : {2.0, 4.0, 8.0}) {
      const DiscreteMeasure mu = measure_for_t(model, t, {-w, w}, s);
      drop = std::max(drop, previous - mu.captured_mass);
      previous = mu.captured_mass;
      if (w == 8.0) main.push_back(mu);
    }
    out.push_back(lower(suite, "captured_mass[t=" + t_label(t) + "]", previous, 1.0 - s.eps_mass,
                        "window [-8,8]"));
    out.push_back(upper(suite, "captured_mass_monotone[t=" + t_label(t) + "]", std::max(drop, 0.0), 0.0,
                        "largest decrease over [-2,2] < [-4,4] < [-8,8]"));
  }
  const DiscreteMeasure mu_plus = measure_for_t(model, 1.0, {-8, 8}, s);
  const DiscreteMeasure mu_minus = measure_for_t(model, -1.0, {-8, 8}, s);

  const DiscreteMeasure* all[] = {&main[0], &mu_plus, &mu_minus, &main[1]};
  for (const DiscreteMeasure* mu : all) {
    const StieltjesResult r = stieltjes_check(model, *mu, Complex(0, 1), s);
    out.push_back(upper(suite, "stieltjes[t=" + t_label(mu->t) + "]", r.residual, 1e-5,
                        "z = i, window [-8,8]"));
  }
  for (const DiscreteMeasure* mu : {&mu_plus, &mu_minus}) {
    const MomentAtZero r = moment_at_zero(*mu, s);
    out.push_back(upper(suite, "moment_at_zero[t=" + t_label(mu->t) + "]", r.residual, 1e-5,
                        "sum mass/x vs t"));
  }
  const InterlacingVerdict i1 = interlacing_check(main[0], main[1]);
  out.push_back(upper(suite, "interlacing[t=0,inf]", i1.alternating ? 0.0 : 1.0, 0.0,
                      std::to_string(i1.compared) + " points compared"));
  const InterlacingVerdict i2 = interlacing_check(mu_plus, mu_minus);
  out.push_back(upper(suite, "interlacing[t=1,-1]", i2.alternating ? 0.0 : 1.0, 0.0,
                      std::to_string(i2.compared) + " points compared"));

  const DiscreteMeasure at_one = measure_for_point(model, 1.0, {-8, 8}, s);
  double nearest = kInf;
  for (double x : at_one.support.points) nearest = std::min(nearest, std::abs(x - 1.0));
  out.push_back(upper(suite, "measure_for_point[x0=1]", nearest,
                      std::max(10.0 * s.refinement_tol, 1e-10 * 2.0), "distance of x0 to the support"));
}

void lemma31(const JacobiModel& model, const Settings& s, std::vector<CheckLine>& out) {
  const std::string suite = "lemma31";
  for (double t : {0.0, kInf}) {
    const DiscreteMeasure mu = measure_for_t(model, t, {-8, 8}, s);
    for (double v : {0.0, 0.5}) {
      double worst_excess = -kInf;
      double worst_sum = 0.0, bound_at_worst = 0.0;
      for (const Lemma31Row& r : lemma31_integrals(model, mu, v, 5, s)) {
        const double excess_B = std::abs(r.sum_B) - (1e-6 + r.tail_B);
        const double excess_D = std::abs(r.sum_D) - (1e-6 + r.tail_D);
        if (excess_B > worst_excess) {
          worst_excess = excess_B;
          worst_sum = std::abs(r.sum_B);
          bound_at_worst = 1e-6 + r.tail_B;
        }
        if (excess_D > worst_excess) {
          worst_excess = excess_D;
          worst_sum = std::abs(r.sum_D);
          bound_at_worst = 1e-6 + r.tail_D;
        }
      }
      out.push_back(upper(suite, "integrals[t=" + t_label(t) + ",v=" + t_label(v) + "]", worst_sum,
                          bound_at_worst, "k <= 5, window [-8,8], threshold 1e-6 + tail bound"));
    }
  }

  // Finite-n sums vanish exactly for n > k once the measure is essentially complete.
  for (double t : {0.0, kInf}) {
    const DiscreteMeasure mu = measure_for_t(model, t, {-4096, 4096}, s);
    double worst = 0.0;
    for (std::size_t k = 0; k <= 3; ++k)
      for (std::size_t n = k + 1; n <= k + 3; ++n)
        worst = std::max(worst, std::abs(lemma31_finite(model, mu, 0.0, k, n, s).second));
    out.push_back(upper(suite, "finite_n_D[t=" + t_label(t) + "]", worst, 1e-9,
                        "k <= 3, k < n <= k+3, window [-4096,4096]"));
  }

  std::vector<Window> schedule;
  for (int k = 1; k <= 5; ++k) schedule.push_back({-std::ldexp(1.0, k), std::ldexp(1.0, k)});
  const DivergenceResult div = divergence_diagnostic(model, 0.0, schedule, s);
  double min_step = kInf;
  for (std::size_t i = 1; i < div.rows.size(); ++i) min_step = std::min(min_step, div.rows[i].S - div.rows[i - 1].S);
  out.push_back(strictly_above(suite, "divergence_strict_increase", min_step, 0.0,
                               "smallest S step over [-2^k,2^k], k = 1..5"));
  const double ratio = div.rows.back().S / div.rows.front().S;
  out.push_back(lower(suite, "divergence_growth", ratio, 10.0, "S(final)/S(first)"));
  out.push_back(upper(suite, "contrast_D_null", div.contrast, 1e-12, "sum mass D(u,0)^2 over supp(mu[0])"));
}

void parseval(const JacobiModel& model, const Settings& s, std::vector<CheckLine>& out) {
  const std::string suite = "parseval";
  UniformStream rng(31337);
  std::vector<FiniteVector> cs;
  for (int i = 0; i < 20; ++i) {
    FiniteVector c;
    const auto len = 1 + static_cast<std::size_t>(rng.next(0, 8));
    for (std::size_t k = 0; k < len; ++k) c.entries.emplace_back(rng.next(-1, 1), rng.next(-1, 1));
    cs.push_back(std::move(c));
  }
  for (double t : {0.0, kInf}) {
    const DiscreteMeasure mu = measure_for_t(model, t, {-4096, 4096}, s);
    double worst = 0.0;
    for (const FiniteVector& c : cs) {
      double lhs = 0.0;
      for (std::size_t i = 0; i < mu.masses.size(); ++i)
        lhs += mu.masses[i] * std::norm(eval_Fc_Gc(model, c, mu.support.points[i], s).F);
      worst = std::max(worst, std::abs(lhs - std::pow(c.norm(), 2)));
    }
    out.push_back(upper(suite, "parseval[t=" + t_label(t) + "]", worst, 1e-6,
                        "20 vectors of length <= 8, window [-4096,4096]"));
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"identities", "eigenrelation", "measures", "lemma31",
                                                 "parseval"};
  return names;
}

std::vector<CheckLine> run_suite(const JacobiModel& model, const std::string& suite,
                                 const Settings& settings) {
  std::vector<CheckLine> out;
  const auto run = [&](const std::string& name) {
    if (name == "identities") identities(model, settings, out);
    else if (name == "eigenrelation") eigenrelation(model, settings, out);
    else if (name == "measures") measures(model, settings, out);
    else if (name == "lemma31") lemma31(model, settings, out);
    else if (name == "parseval") parseval(model, settings, out);
  };
  if (suite == "all") {
    for (const auto& name : suite_names()) run(name);
    return out;
  }
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw ConfigError("unknown suite '" + suite +
                      "' (expected identities, eigenrelation, measures, lemma31, parseval or all)");
  run(suite);
  return out;
}

std::string format_check(const CheckLine& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "[%s] %s/%s: %s %.6e %s threshold %.6e", c.pass ? "PASS" : "FAIL",
                c.suite.c_str(), c.name.c_str(), c.at_least ? "value" : "residual", c.residual,
                c.at_least ? (c.strict ? ">" : ">=") : "<=", c.threshold);
  std::string line = buf;
  if (!c.note.empty()) line += " (" + c.note + ")";
  return line;
}

}  // namespace momentlab
