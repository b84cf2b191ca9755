#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "momentlab/jacobi.hpp"
#include "momentlab/nextremal.hpp"

namespace momentlab {

/// Families spanning subspaces of D(T), anchored at a real v0:
///   P: p_u + B(u,v0) p_v0   over zeros u != v0 of D(., v0)
///   Q: q_u - C(u,v0) q_v0   over zeros u != v0 of A(., v0)
///   M: p_u - D(u,v0) q_v0   over zeros u of B(., v0)
enum class FamilyKind { P, Q, M };

std::string to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& text);

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::P;
  double v0 = 0.0;
  SupportSet member_zeros;            // sorted, v0 removed for P and Q
  std::vector<double> zeros;          // member order: increasing |u - v0|
  std::vector<double> coefficients;   // B(u,v0), -C(u,v0) or -D(u,v0)
  std::vector<TruncatedVector> members;  // normalized, common trunc_len
  std::size_t trunc_len = 0;

  // M only: C(v0) branch and the parameter t0 = -A(v0)/C(v0) (inf on the C(v0) = 0 branch).
  std::string branch;
  double t0 = 0.0;
  std::vector<Verdict> checks;
};

FamilySpec build_family(const JacobiModel& model, FamilyKind kind, double v0, const Window& window,
                        const Settings& settings);

/// Smallest symmetric window around v0 (half-width 8 * 4^k) holding at least
/// `members` family members. Scans only the newly added annuli.
Window window_for_members(const JacobiModel& model, FamilyKind kind, double v0,
                          std::size_t members, const Settings& settings);

/// Copy of the family with the member at 1-based position `index` removed.
FamilySpec without_member(const FamilySpec& family, std::size_t index);

/// Unit vector along p_u (P, M) or q_u (Q) at the family's truncation.
TruncatedVector base_vector(const JacobiModel& model, const FamilySpec& family, double u,
                            const Settings& settings);

struct ProjectionResult {
  double residual = 0.0;
  bool regularized = false;
};

/// Least-squares residual of `target` against span(members), from a Householder
/// QR of the member matrix. Cholesky of the Gram only decides `regularized`
/// (shift 1e-13 * trace / m); a failed shifted factorization throws.
ProjectionResult project(std::span<const TruncatedVector> members, const TruncatedVector& target);

struct DensityReport {
  FamilySpec family;
  std::vector<std::size_t> m_values;
  std::vector<std::pair<std::string, std::vector<double>>> residuals;
  std::vector<double> gram_min_eig;
  std::vector<double> gram_max_eig;
  std::vector<bool> regularized;
  std::vector<Verdict> verdicts;
};

using NamedTarget = std::pair<std::string, TruncatedVector>;

DensityReport projection_residuals(const FamilySpec& family, const std::vector<NamedTarget>& targets,
                                   std::size_t m_max);

/// Resolves target names e<k>, pv0, nearest (base vector of member 1) and
/// dropped (base vector of `dropped_u`).
NamedTarget make_target(const JacobiModel& model, const FamilySpec& family, const std::string& name,
                        const Settings& settings, std::optional<double> dropped_u = std::nullopt);

struct OptimalityResult {
  std::vector<double> support;        // zeros of D(., v0) in the window
  double max_pairwise_inner = 0.0;    // |<p~_u1, p~_u2>|, u1 != u2
  double max_gram_identity_defect = 0.0;
  double max_member_inner = 0.0;      // |<p~_u1, member_u>|, u != u1
  double max_expansion_residual = 0.0;  // relative
  std::vector<Verdict> verdicts;
};

OptimalityResult optimality_check(const JacobiModel& model, double v0, const Window& window,
                                  const Settings& settings, double tol = 1e-8);

struct Lemma31Row {
  std::size_t k = 0;
  Complex sum_B;
  Complex sum_D;
  double tail_B = 0.0;
  double tail_D = 0.0;
};

/// sum_x mass(x) x^k B(x, v) and sum_x mass(x) x^k D(x, v) over the window,
/// k = 0..degree, with bounds on what lies outside the window.
std::vector<Lemma31Row> lemma31_integrals(const JacobiModel& model, const DiscreteMeasure& measure,
                                          Complex v, std::size_t degree, const Settings& settings);

/// Same sums with B_n, D_n in place of B, D.
std::pair<Complex, Complex> lemma31_finite(const JacobiModel& model, const DiscreteMeasure& measure,
                                           Complex v, std::size_t k, std::size_t n,
                                           const Settings& settings);

struct DivergenceRow {
  Window window;
  std::size_t points = 0;
  double S = 0.0;
};

struct DivergenceResult {
  std::vector<DivergenceRow> rows;
  double contrast = 0.0;  // sum mass * D(u, v0)^2 over supp(mu[v0]) in the last window
  bool divergence_consistent = false;
  std::vector<Verdict> verdicts;
};

DivergenceResult divergence_diagnostic(const JacobiModel& model, double v0,
                                       const std::vector<Window>& windows, const Settings& settings);

struct Lemma32Result {
  double residual = 0.0;
  double closed_form = 0.0;
};

/// Orthonormal x_1..x_dim; family x_n + a_n x_1, n = 2..m+1 (a[0] is a_2).
/// Residual of x_1 after projection, and 1/sqrt(1 + sum |a_n|^2).
Lemma32Result lemma32_finite(std::size_t basis_dim, std::span<const double> a, std::size_t m);

/// max over n <= N and the samples of |a_0 q_{n+1}(x) - kappa r_n(x)| / max(1, |r_n(x)|),
/// r_n the orthonormal polynomials of J^(1), kappa fixed at n = 0.
double q_shift_check(const JacobiModel& model, std::size_t N, std::span<const double> samples);

}  // namespace momentlab
