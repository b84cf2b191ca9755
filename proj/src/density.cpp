#include "momentlab/density.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "momentlab/errors.hpp"
#include "momentlab/nevanlinna.hpp"

namespace momentlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

ZeroTarget zero_target_for(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::P: return ZeroTarget::D;
    case FamilyKind::Q: return ZeroTarget::A;
    case FamilyKind::M: return ZeroTarget::B;
  }
  return ZeroTarget::D;
}

SequenceKind base_kind(FamilyKind kind) {
  return kind == FamilyKind::Q ? SequenceKind::Q : SequenceKind::P;
}

SequenceKind anchor_kind(FamilyKind kind) {
  return kind == FamilyKind::P ? SequenceKind::P : SequenceKind::Q;
}

bool excludes_anchor(FamilyKind kind) { return kind != FamilyKind::M; }

double anchor_match_tol(double v0, const Settings& settings) {
  return std::max(10.0 * settings.refinement_tol, 1e-12 * (1.0 + std::abs(v0)));
}

// Sequence values at exactly `len` entries, with the tail estimate of the adaptive run.
TruncatedVector sequence_at(const JacobiModel& model, double z, SequenceKind kind, std::size_t len,
                            double tail) {
  const PQValues pq = eval_pq(model, z, len - 1);
  TruncatedVector out;
  out.entries = kind == SequenceKind::P ? pq.p : pq.q;
  out.tail_estimate = tail;
  return out;
}

std::vector<double> merge_points(std::vector<double> a, const std::vector<double>& b, double tol) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  std::vector<double> out;
  for (double x : a)
    if (out.empty() || x - out.back() > 2.0 * tol) out.push_back(x);
  return out;
}

std::size_t count_members(FamilyKind kind, double v0, const std::vector<double>& points,
                          const Settings& settings) {
  if (!excludes_anchor(kind)) return points.size();
  const double tol = anchor_match_tol(v0, settings);
  return static_cast<std::size_t>(std::count_if(
      points.begin(), points.end(), [&](double u) { return std::abs(u - v0) > tol; }));
}

SupportSet grow_zero_set(const JacobiModel& model, FamilyKind kind, double v0, std::size_t members,
                         const Settings& settings) {
  const ZeroTarget which = zero_target_for(kind);
  double half = 8.0;
  SupportSet set = find_zeros(model, which, v0, {v0 - half, v0 + half}, settings);
  while (count_members(kind, v0, set.points, settings) < members) {
    const double next = 4.0 * half;
    if (next > 1e13) {
      std::ostringstream msg;
      msg << "only " << count_members(kind, v0, set.points, settings) << " members of "
          << to_string(kind) << "(" << v0 << ") within |u - v0| <= " << half << ", " << members
          << " requested";
      throw NumericError(msg.str());
    }
    const SupportSet left = find_zeros(model, which, v0, {v0 - next, v0 - half}, settings);
    const SupportSet right = find_zeros(model, which, v0, {v0 + half, v0 + next}, settings);
    set.points = merge_points(set.points, left.points, settings.refinement_tol);
    set.points = merge_points(set.points, right.points, settings.refinement_tol);
    set.window = {v0 - next, v0 + next};
    half = next;
  }
  return set;
}

FamilySpec family_from_support(const JacobiModel& model, FamilyKind kind, double v0,
                               SupportSet support, const Settings& settings) {
  FamilySpec fam;
  fam.kind = kind;
  fam.v0 = v0;
  if (excludes_anchor(kind)) {
    const double tol = anchor_match_tol(v0, settings);
    std::erase_if(support.points, [&](double u) { return std::abs(u - v0) <= tol; });
  }
  fam.member_zeros = support;
  fam.zeros = support.points;
  std::stable_sort(fam.zeros.begin(), fam.zeros.end(), [&](double x, double y) {
    return std::abs(x - v0) < std::abs(y - v0) || (std::abs(x - v0) == std::abs(y - v0) && x < y);
  });

  const SequenceKind bk = base_kind(kind), ak = anchor_kind(kind);
  const TruncatedVector anchor_adaptive = adaptive_sequence(model, v0, ak, settings);
  std::size_t L = anchor_adaptive.trunc_len();
  std::vector<double> base_tails;
  for (double u : fam.zeros) {
    const TruncatedVector base = adaptive_sequence(model, u, bk, settings);
    L = std::max(L, base.trunc_len());
    base_tails.push_back(base.tail_estimate);
  }
  fam.trunc_len = L;
  const TruncatedVector anchor = sequence_at(model, v0, ak, L, anchor_adaptive.tail_estimate);

  for (std::size_t i = 0; i < fam.zeros.size(); ++i) {
    const double u = fam.zeros[i];
    const NevanlinnaValue nv = nev_series(model, u, v0, settings);
    double coef = 0.0;
    switch (kind) {
      case FamilyKind::P: coef = nv.B.real(); break;
      case FamilyKind::Q: coef = -nv.C.real(); break;
      case FamilyKind::M: coef = -nv.D.real(); break;
    }
    fam.coefficients.push_back(coef);
    const TruncatedVector base = sequence_at(model, u, bk, L, base_tails[i]);
    fam.members.push_back(base.plus(coef, anchor).normalized());
  }

  if (kind == FamilyKind::M) {
    const NevanlinnaValue at_v0 = nev_one_var(model, v0, settings);
    const double A = at_v0.A.real(), C = at_v0.C.real();
    if (std::abs(C) < settings.c_zero_tol * (1.0 + std::abs(A))) {
      fam.branch = "C(v0)=0";
      fam.t0 = std::numeric_limits<double>::infinity();
    } else {
      fam.branch = "C(v0)!=0";
      fam.t0 = -A / C;
    }
    // The zeros of B(., v0) must coincide with supp(mu_t0).
    const SupportSet mu = find_zeros(model, ZeroTarget::BtD, fam.t0, support.window, settings);
    bool same = mu.points.size() == support.points.size();
    double worst = 0.0;
    for (std::size_t i = 0; same && i < mu.points.size(); ++i) {
      const double d = std::abs(mu.points[i] - support.points[i]);
      worst = std::max(worst, d / (1.0 + std::abs(mu.points[i])));
    }
    same = same && worst <= 1e-8;
    fam.checks.push_back({"M zero set equals supp(mu_t0)", same,
                          "branch " + fam.branch + ", t0 = " + fmt(fam.t0) + ", " +
                              std::to_string(mu.points.size()) + " vs " +
                              std::to_string(support.points.size()) +
                              " points, max relative gap " + fmt(worst) + " (threshold 1e-08)"});
  }
  return fam;
}

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::P: return "P";
    case FamilyKind::Q: return "Q";
    case FamilyKind::M: return "M";
  }
  return "?";
}

FamilyKind parse_family_kind(const std::string& text) {
  if (text == "P" || text == "p") return FamilyKind::P;
  if (text == "Q" || text == "q") return FamilyKind::Q;
  if (text == "M" || text == "m") return FamilyKind::M;
  throw ConfigError("unknown family kind '" + text + "' (expected P, Q or M)");
}

FamilySpec build_family(const JacobiModel& model, FamilyKind kind, double v0, const Window& window,
                        const Settings& settings) {
  return family_from_support(model, kind, v0,
                             find_zeros(model, zero_target_for(kind), v0, window, settings), settings);
}

Window window_for_members(const JacobiModel& model, FamilyKind kind, double v0,
                          std::size_t members, const Settings& settings) {
  return grow_zero_set(model, kind, v0, members, settings).window;
}

FamilySpec without_member(const FamilySpec& family, std::size_t index) {
  if (index == 0 || index > family.zeros.size())
    throw ConfigError("drop-member index " + std::to_string(index) + " out of range 1.." +
                      std::to_string(family.zeros.size()));
  FamilySpec out = family;
  const auto pos = static_cast<std::ptrdiff_t>(index - 1);
  const double u = out.zeros[index - 1];
  out.zeros.erase(out.zeros.begin() + pos);
  out.coefficients.erase(out.coefficients.begin() + pos);
  out.members.erase(out.members.begin() + pos);
  std::erase(out.member_zeros.points, u);
  return out;
}

TruncatedVector base_vector(const JacobiModel& model, const FamilySpec& family, double u,
                            const Settings& settings) {
  const SequenceKind bk = base_kind(family.kind);
  const TruncatedVector adaptive = adaptive_sequence(model, u, bk, settings, family.trunc_len);
  return sequence_at(model, u, bk, std::max(family.trunc_len, adaptive.trunc_len()),
                     adaptive.tail_estimate)
      .normalized();
}

NamedTarget make_target(const JacobiModel& model, const FamilySpec& family, const std::string& name,
                        const Settings& settings, std::optional<double> dropped_u) {
  if (name.size() > 1 && name[0] == 'e') {
    std::size_t k = 0;
    try {
      k = std::stoul(name.substr(1));
    } catch (const std::exception&) {
      throw ConfigError("bad target '" + name + "'");
    }
    return {name, TruncatedVector::unit(k)};
  }
  if (name == "pv0") {
    const TruncatedVector p = seq_p(model, family.v0, settings, family.trunc_len);
    return {name, p.normalized()};
  }
  if (name == "nearest") {
    if (family.zeros.empty()) throw ConfigError("family has no members");
    return {name, base_vector(model, family, family.zeros.front(), settings)};
  }
  if (name == "dropped") {
    if (!dropped_u) throw ConfigError("target 'dropped' needs --drop-member");
    return {name, base_vector(model, family, *dropped_u, settings)};
  }
  throw ConfigError("unknown target '" + name + "' (expected e<k>, pv0, nearest or dropped)");
}

namespace {

Eigen::MatrixXcd as_matrix(std::span<const TruncatedVector> members, std::size_t rows) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                              static_cast<Eigen::Index>(members.size()));
  for (std::size_t j = 0; j < members.size(); ++j)
    for (std::size_t i = 0; i < members[j].entries.size(); ++i)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = members[j].entries[i];
  return M;
}

Eigen::VectorXcd as_vector(const TruncatedVector& x, std::size_t rows) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < x.entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = x.entries[i];
  return v;
}

// Cholesky of the Gram matrix, regularized only on failure. Decides the
// regularization flag and the conditioning error; residuals come from QR.
bool gram_needs_regularization(const Eigen::MatrixXcd& G) {
  const Eigen::Index m = G.rows();
  Eigen::LLT<Eigen::MatrixXcd> llt(G);
  if (llt.info() == Eigen::Success) return false;
  const double lambda = 1e-13 * G.trace().real() / static_cast<double>(m);
  llt.compute(G + lambda * Eigen::MatrixXcd::Identity(m, m));
  if (llt.info() != Eigen::Success)
    throw ConditioningError("Gram matrix singular beyond the regularization floor at m = " +
                                std::to_string(m),
                            static_cast<std::size_t>(m));
  return true;
}

// Residual norms of t against the leading 1..m columns of M: ||(Q^H t)[k:]||.
std::vector<double> nested_residuals(const Eigen::HouseholderQR<Eigen::MatrixXcd>& qr,
                                     const Eigen::VectorXcd& t, std::size_t m) {
  const Eigen::VectorXcd y = qr.householderQ().adjoint() * t;
  std::vector<double> out(m);
  const Eigen::Index rows = y.size();
  for (std::size_t k = 1; k <= m; ++k) {
    const Eigen::Index start = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), rows);
    out[k - 1] = y.tail(rows - start).norm();
  }
  return out;
}

}  // namespace

ProjectionResult project(std::span<const TruncatedVector> members, const TruncatedVector& target) {
  std::size_t rows = target.entries.size();
  for (const auto& x : members) rows = std::max(rows, x.entries.size());
  const Eigen::MatrixXcd M = as_matrix(members, rows);
  const Eigen::VectorXcd t = as_vector(target, rows);
  if (members.empty()) return {t.norm(), false};
  ProjectionResult out;
  out.regularized = gram_needs_regularization(M.adjoint() * M);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M);
  out.residual = nested_residuals(qr, t, members.size()).back();
  return out;
}

DensityReport projection_residuals(const FamilySpec& family, const std::vector<NamedTarget>& targets,
                                   std::size_t m_max) {
  DensityReport report;
  report.family = family;
  const std::size_t available = family.members.size();
  const std::size_t m_top = std::min(m_max, available);
  report.verdicts.push_back({"members available", m_top == m_max,
                             std::to_string(available) + " members, " + std::to_string(m_max) +
                                 " requested"});
  if (m_top == 0) return report;

  std::size_t rows = family.trunc_len;
  for (const auto& [name, t] : targets) rows = std::max(rows, t.entries.size());
  const Eigen::MatrixXcd M =
      as_matrix(std::span<const TruncatedVector>(family.members.data(), m_top), rows);
  const Eigen::MatrixXcd G = M.adjoint() * M;

  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M);
  for (const auto& [name, t] : targets)
    report.residuals.push_back({name, nested_residuals(qr, as_vector(t, rows), m_top)});
  for (std::size_t m = 1; m <= m_top; ++m) {
    const auto mi = static_cast<Eigen::Index>(m);
    report.m_values.push_back(m);
    const Eigen::MatrixXcd Gm = G.topLeftCorner(mi, mi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(Gm, Eigen::EigenvaluesOnly);
    report.gram_min_eig.push_back(eig.eigenvalues().minCoeff());
    report.gram_max_eig.push_back(eig.eigenvalues().maxCoeff());
    report.regularized.push_back(gram_needs_regularization(Gm));
  }

  for (const auto& [name, curve] : report.residuals) {
    double worst_rise = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) worst_rise = std::max(worst_rise, curve[i] - curve[i - 1]);
    report.verdicts.push_back({"nonincreasing[" + name + "]", worst_rise <= 1e-12,
                               "max rise " + fmt(worst_rise) + " (threshold 1e-12)"});
    const double first = curve.front(), last = curve.back();
    report.verdicts.push_back({"decay10x[" + name + "]", last <= first / 10.0,
                               "residual(m=" + std::to_string(m_top) + ") = " + fmt(last) +
                                   ", residual(m=1)/10 = " + fmt(first / 10.0)});
  }
  const bool any_reg = std::any_of(report.regularized.begin(), report.regularized.end(),
                                   [](bool b) { return b; });
  report.verdicts.push_back({"gram regularization", true, any_reg ? "fired" : "not fired"});
  for (const auto& check : family.checks) report.verdicts.push_back(check);
  return report;
}

OptimalityResult optimality_check(const JacobiModel& model, double v0, const Window& window,
                                  const Settings& settings, double tol) {
  OptimalityResult out;
  const SupportSet supp = find_zeros(model, ZeroTarget::D, v0, window, settings);
  out.support = supp.points;
  const std::size_t n = supp.points.size();
  if (n < 2) throw std::invalid_argument("optimality_check needs at least two zeros of D(., v0)");

  std::size_t L = 0;
  for (double u : supp.points) L = std::max(L, seq_p(model, u, settings).trunc_len());
  std::vector<TruncatedVector> unit;
  for (double u : supp.points) unit.push_back(sequence_at(model, u, SequenceKind::P, L, 0.0).normalized());

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex g = inner(unit[i], unit[j]);
      const double defect = std::abs(g - (i == j ? 1.0 : 0.0));
      out.max_gram_identity_defect = std::max(out.max_gram_identity_defect, defect);
      if (i != j) out.max_pairwise_inner = std::max(out.max_pairwise_inner, std::abs(g));
    }
  }

  FamilySpec fam = family_from_support(model, FamilyKind::P, v0, supp, settings);
  const std::size_t nearest = std::min<std::size_t>(5, fam.zeros.size());
  for (std::size_t a = 0; a < nearest; ++a) {
    const TruncatedVector u1 = base_vector(model, fam, fam.zeros[a], settings);
    for (std::size_t b = 0; b < fam.zeros.size(); ++b) {
      if (a == b) continue;
      out.max_member_inner = std::max(out.max_member_inner, std::abs(inner(u1, fam.members[b])));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const ReductionResiduals r = reduce_two_var(model, supp.points[i], supp.points[j], v0, settings);
      out.max_expansion_residual = std::max(out.max_expansion_residual, r.expansion / r.expansion_scale);
    }
  }

  const std::string th = " (threshold " + fmt(tol) + ")";
  out.verdicts.push_back({"pairwise orthogonality", out.max_pairwise_inner <= tol,
                          "max |<p~_u1, p~_u2>| = " + fmt(out.max_pairwise_inner) + th});
  out.verdicts.push_back({"orthonormal Gram", out.max_gram_identity_defect <= tol,
                          "max |G - I| = " + fmt(out.max_gram_identity_defect) + th});
  out.verdicts.push_back({"p_u1 orthogonal to other P members", out.max_member_inner <= tol,
                          "max |<p~_u1, member_u>| = " + fmt(out.max_member_inner) + th});
  out.verdicts.push_back({"anchor expansion of D(u1,u2)", out.max_expansion_residual <= tol,
                          "max relative residual = " + fmt(out.max_expansion_residual) + th});
  return out;
}

namespace {

// sum_j x_j y_j over the common prefix (no conjugation).
Complex bilinear(const TruncatedVector& x, const TruncatedVector& y) {
  Complex s = 0.0;
  const std::size_t n = std::min(x.entries.size(), y.entries.size());
  for (std::size_t k = 0; k < n; ++k) s += x.entries[k] * y.entries[k];
  return s;
}

double squared_norm(const FiniteVector& x) {
  double s = 0.0;
  for (const auto& v : x.entries) s += std::norm(v);
  return s;
}

}  // namespace

std::vector<Lemma31Row> lemma31_integrals(const JacobiModel& model, const DiscreteMeasure& measure,
                                          Complex v, std::size_t degree, const Settings& settings) {
  if (measure.captured_mass < 1.0 - settings.eps_mass)
    throw InsufficientMass("captured mass " + fmt(measure.captured_mass) + " below 1 - eps_mass");
  const TruncatedVector pv = seq_p(model, v, settings);
  const TruncatedVector qv = seq_q(model, v, settings);
  const std::size_t count = measure.support.points.size();

  // Per support point: F_q(x) = sum p_j(x) q_j(v), F_p(x) = sum p_j(x) p_j(v).
  std::vector<Complex> Fq(count), Fp(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = measure.support.points[i];
    const TruncatedVector px0 = seq_p(model, x, settings);
    const std::size_t L = std::max({px0.trunc_len(), pv.trunc_len(), qv.trunc_len()});
    const TruncatedVector px = seq_p(model, x, settings, L);
    Fq[i] = bilinear(px, seq_q(model, v, settings, L));
    Fp[i] = bilinear(px, seq_p(model, v, settings, L));
  }

  double in_Fq = 0.0, in_Fp = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    in_Fq += measure.masses[i] * std::norm(Fq[i]);
    in_Fp += measure.masses[i] * std::norm(Fp[i]);
  }
  const double norm_qv2 = std::pow(qv.norm(), 2), norm_pv2 = std::pow(pv.norm(), 2);
  const double out_Fq = std::max(0.0, norm_qv2 - in_Fq) + 8.0 * kEps * norm_qv2;
  const double out_Fp = std::max(0.0, norm_pv2 - in_Fp) + 8.0 * kEps * norm_pv2;
  const double out_mass = std::max(0.0, 1.0 - measure.captured_mass) + 8.0 * kEps;

  std::vector<Lemma31Row> rows;
  FiniteVector Jk = FiniteVector::unit(0);  // J^k e_0
  for (std::size_t k = 0; k <= degree; ++k) {
    if (k > 0) Jk = apply_J(model, Jk);
    // (J - v) J^k e_0 represents u^k (u - v).
    FiniteVector P = apply_J(model, Jk);
    for (std::size_t i = 0; i < Jk.entries.size(); ++i) P.entries[i] -= v * Jk.entries[i];
    const double M2k = squared_norm(Jk), MP = squared_norm(P);

    Lemma31Row row;
    row.k = k;
    double in2k = 0.0, inP = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double x = measure.support.points[i];
      const double w = measure.masses[i];
      const double xk = std::pow(x, static_cast<double>(k));
      const Complex B = -1.0 + (x - v) * Fq[i];
      const Complex D = (x - v) * Fp[i];
      row.sum_B += w * xk * B;
      row.sum_D += w * xk * D;
      in2k += w * xk * xk;
      inP += w * std::norm(xk * (x - v));
    }
    const double out2k = std::max(0.0, M2k - in2k) + 8.0 * kEps * M2k;
    const double outP = std::max(0.0, MP - inP) + 8.0 * kEps * MP;
    row.tail_B = std::sqrt(out_mass * out2k) + std::sqrt(outP * out_Fq);
    row.tail_D = std::sqrt(outP * out_Fp);
    rows.push_back(row);
  }
  return rows;
}

std::pair<Complex, Complex> lemma31_finite(const JacobiModel& model, const DiscreteMeasure& measure,
                                           Complex v, std::size_t k, std::size_t n,
                                           const Settings& settings) {
  Complex sB = 0.0, sD = 0.0;
  for (std::size_t i = 0; i < measure.support.points.size(); ++i) {
    const double x = measure.support.points[i];
    const NevanlinnaValue nv = nev_partial(model, x, v, n, settings.precision);
    const double w = measure.masses[i] * std::pow(x, static_cast<double>(k));
    sB += w * nv.B;
    sD += w * nv.D;
  }
  return {sB, sD};
}

DivergenceResult divergence_diagnostic(const JacobiModel& model, double v0,
                                       const std::vector<Window>& windows, const Settings& settings) {
  if (windows.empty()) throw std::invalid_argument("divergence_diagnostic needs windows");
  Window outer = windows.front();
  for (const auto& w : windows) outer = {std::min(outer.lo, w.lo), std::max(outer.hi, w.hi)};
  const SupportSet supp = find_zeros(model, ZeroTarget::D, v0, outer, settings);
  const double tol = anchor_match_tol(v0, settings);

  struct Term {
    double u;
    double b_over_norm;  // B(u,v0) / ||p_u||
    double d_over_norm;  // D(u,v0) / ||p_u||
  };
  std::vector<Term> terms;
  for (double u : supp.points) {
    const NevanlinnaValue nv = nev_series(model, u, v0, settings);
    const double nrm = seq_p(model, u, settings).norm();
    terms.push_back({u, nv.B.real() / nrm, nv.D.real() / nrm});
  }

  DivergenceResult out;
  for (const auto& w : windows) {
    DivergenceRow row;
    row.window = w;
    for (const auto& t : terms) {
      if (!w.contains(t.u)) continue;
      ++row.points;
      if (std::abs(t.u - v0) > tol) row.S += t.b_over_norm * t.b_over_norm;
    }
    out.rows.push_back(row);
  }
  const Window& last = windows.back();
  for (const auto& t : terms)
    if (last.contains(t.u)) out.contrast += t.d_over_norm * t.d_over_norm;

  bool strictly = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) strictly = strictly && out.rows[i].S > out.rows[i - 1].S;
  const double first = out.rows.front().S, final = out.rows.back().S;
  const bool tenfold = final >= 10.0 * first;
  out.divergence_consistent = strictly && tenfold;

  std::ostringstream table;
  for (std::size_t i = 0; i < out.rows.size(); ++i)
    table << (i ? ", " : "") << "[" << out.rows[i].window.lo << "," << out.rows[i].window.hi
          << "]:" << fmt(out.rows[i].S);
  out.verdicts.push_back({"S strictly increasing", strictly, table.str()});
  out.verdicts.push_back({"S(final) >= 10 S(first)", tenfold,
                          "S(final) = " + fmt(final) + ", 10 S(first) = " + fmt(10.0 * first)});
  out.verdicts.push_back({"D(., v0) is null in L2(mu[v0])", out.contrast <= 1e-12,
                          "sum mass D^2 = " + fmt(out.contrast) + " (threshold 1e-12)"});
  return out;
}

Lemma32Result lemma32_finite(std::size_t basis_dim, std::span<const double> a, std::size_t m) {
  if (a.size() < m) throw std::invalid_argument("lemma32_finite: need m coefficients");
  if (basis_dim < m + 1) throw std::invalid_argument("lemma32_finite: basis_dim must be >= m + 1");
  std::vector<TruncatedVector> family;
  double sum_sq = 0.0;
  for (std::size_t n = 2; n <= m + 1; ++n) {
    TruncatedVector x;
    x.entries.assign(basis_dim, 0.0);
    x.entries[n - 1] = 1.0;
    x.entries[0] = a[n - 2];
    sum_sq += a[n - 2] * a[n - 2];
    family.push_back(std::move(x));
  }
  TruncatedVector x1;
  x1.entries.assign(basis_dim, 0.0);
  x1.entries[0] = 1.0;
  Lemma32Result r;
  r.residual = project(family, x1).residual;
  r.closed_form = 1.0 / std::sqrt(1.0 + sum_sq);
  return r;
}

double q_shift_check(const JacobiModel& model, std::size_t N, std::span<const double> samples) {
  const JacobiModel shifted = model.shifted();
  const double a0 = model.coeff(0).a;
  double worst = 0.0;
  for (double x : samples) {
    const PQValues base = eval_pq(model, x, N + 1);
    const PQValues r = eval_pq(shifted, x, N);
    const Complex kappa = a0 * base.q[1] / r.p[0];
    for (std::size_t n = 0; n <= N; ++n) {
      const double residual = std::abs(a0 * base.q[n + 1] - kappa * r.p[n]) /
                              std::max(1.0, std::abs(r.p[n]));
      worst = std::max(worst, residual);
    }
  }
  return worst;
}

}  // namespace momentlab
