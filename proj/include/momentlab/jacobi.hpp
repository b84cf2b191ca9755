#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "momentlab/settings.hpp"

namespace momentlab {

using Complex = std::complex<double>;

struct Coefficients {
  double a;  // off-diagonal, > 0
  double b;  // diagonal
};

/// Immutable source of Jacobi coefficients (a_n, b_n), n >= 0.
///
/// The source function must be deterministic. Every query is validated
/// (a_n > 0 and finite); queries past max_index() raise UnavailableCoefficient.
class JacobiModel {
 public:
  using Source = std::function<Coefficients(std::size_t)>;

  JacobiModel(std::string name, std::string identity, Source source,
              std::optional<std::size_t> max_index = std::nullopt);

  const std::string& name() const { return name_; }
  /// Canonical description of every input that affects numbers (used for cache keys).
  const std::string& identity() const { return identity_; }
  std::optional<std::size_t> max_index() const { return max_index_; }

  Coefficients coeff(std::size_t n) const;

  /// J^(1): the model with the first row and column removed.
  JacobiModel shifted() const;

 private:
  std::string name_;
  std::string identity_;
  Source source_;
  std::optional<std::size_t> max_index_;
};

/// Element of F: finitely many nonzero terms, padding with zeros embeds it in l2.
struct FiniteVector {
  std::vector<Complex> entries;

  double norm() const;
  static FiniteVector unit(std::size_t n);
};

/// Finite prefix c_0..c_N of an l2 sequence plus a bound on the discarded tail.
struct TruncatedVector {
  std::vector<Complex> entries;
  double tail_estimate = 0.0;

  std::size_t trunc_len() const { return entries.size(); }
  /// Norm of the stored prefix. Overflow-safe: entries may be near the double
  /// range even when their squares are not representable.
  double norm() const;
  bool converged(double rel_tol) const { return tail_estimate <= rel_tol * norm(); }

  TruncatedVector normalized() const;
  /// this + alpha * other, padding the shorter prefix with zeros.
  TruncatedVector plus(Complex alpha, const TruncatedVector& other) const;
  TruncatedVector scaled(Complex alpha) const;
  static TruncatedVector unit(std::size_t n);
};

double safe_norm(std::span<const Complex> x);
/// <x, y> = sum x_n conj(y_n) over the common prefix.
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
inline Complex inner(const TruncatedVector& x, const TruncatedVector& y) {
  return inner(x.entries, y.entries);
}

struct PQValues {
  std::vector<Complex> p;
  std::vector<Complex> q;
};

/// p_n(z), q_n(z) for n = 0..N by the three-term recurrence
/// (p_0 = 1, p_1 = (z - b_0)/a_0, q_0 = 0, q_1 = 1/a_0).
PQValues eval_pq(const JacobiModel& model, Complex z, std::size_t N,
                 Precision precision = Precision::Standard);

enum class SequenceKind { P, Q };

/// The l2 sequence (p_n(z)) or (q_n(z)) truncated by the adaptive tail rule.
/// The result has at least `min_len` entries.
TruncatedVector adaptive_sequence(const JacobiModel& model, Complex z, SequenceKind kind,
                                  const Settings& settings, std::size_t min_len = 0);

inline TruncatedVector seq_p(const JacobiModel& model, Complex z, const Settings& settings,
                             std::size_t min_len = 0) {
  return adaptive_sequence(model, z, SequenceKind::P, settings, min_len);
}
inline TruncatedVector seq_q(const JacobiModel& model, Complex z, const Settings& settings,
                             std::size_t min_len = 0) {
  return adaptive_sequence(model, z, SequenceKind::Q, settings, min_len);
}

/// (Jc)_n = a_{n-1} c_{n-1} + b_n c_n + a_n c_{n+1}. The result has one more
/// entry than c and is exact.
FiniteVector apply_J(const JacobiModel& model, const FiniteVector& c);
/// Same action on a truncated prefix c_0..c_N. The neighbour c_{N+1} is taken as
/// 0, so only rows n < N are exact. The tail estimate bounds what the prefix
/// cannot see: the missing a_N c_{N+1} in row N, row N+1 and the tail of c
/// pushed through the local coefficients.
TruncatedVector apply_J(const JacobiModel& model, const TruncatedVector& c);

struct FcGcValue {
  Complex F;
  Complex G;
  double err_F = 0.0;
  double err_G = 0.0;
};

FcGcValue eval_Fc_Gc(const JacobiModel& model, const FiniteVector& c, Complex z,
                     const Settings& settings);
FcGcValue eval_Fc_Gc(const JacobiModel& model, const TruncatedVector& c, Complex z,
                     const Settings& settings);

/// Omega(c, d) = <Jc, d> - <c, Jd> accumulated over the rows where J acts
/// exactly on both prefixes (n < min(trunc_len) - 1).
Complex boundary_form(const JacobiModel& model, const TruncatedVector& c,
                      const TruncatedVector& d, const Settings& settings);

struct MembershipVerdict {
  Complex omega_p0;
  Complex omega_q0;
  double scale = 0.0;      // ||c|| + ||Jc||
  double threshold = 0.0;  // tol_omega * scale
  bool member = false;
};

/// Domain test: c is reported in D(T) iff Omega(c, p_0) and Omega(c, q_0)
/// both vanish to tol_omega * (||c|| + ||Jc||).
MembershipVerdict membership_verdict(const JacobiModel& model, const TruncatedVector& c,
                                     const Settings& settings);

struct IndeterminacyReport {
  bool indeterminate = false;
  double norm_p_i = 0.0;
  double norm_q_i = 0.0;
  std::size_t terms = 0;
  std::string detail;
};

/// Runtime diagnostic: ||p_i||, ||q_i|| must converge under the tail rule.
IndeterminacyReport indeterminacy_check(const JacobiModel& model, const Settings& settings);

}  // namespace momentlab
