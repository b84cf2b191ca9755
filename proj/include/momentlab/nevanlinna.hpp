#pragma once

#include <cstddef>

#include "momentlab/jacobi.hpp"

namespace momentlab {

/// Values of the Nevanlinna functions A, B, C, D at (u, v).
struct NevanlinnaValue {
  Complex u;
  Complex v;
  Complex A;
  Complex B;
  Complex C;
  Complex D;
  std::size_t n_used = 0;
  double err_estimate = 0.0;
  // |u - v| * ||p_u|| ||p_v|| style magnitude of the summands; residuals of
  // identities involving these values are judged relative to it.
  double scale = 1.0;

  Complex det_residual() const { return A * D - B * C - 1.0; }
};

/// A(u,v) = (u-v) sum q_k(u) q_k(v), B = -1 + (u-v) sum p_k(u) q_k(v),
/// C = 1 + (u-v) sum q_k(u) p_k(v), D = (u-v) sum p_k(u) p_k(v),
/// all four summed to one common truncation chosen by the tail rule.
NevanlinnaValue nev_series(const JacobiModel& model, Complex u, Complex v,
                           const Settings& settings);

/// Finite-n approximants A_n..D_n from the partial sums k = 0..n.
NevanlinnaValue nev_partial(const JacobiModel& model, Complex u, Complex v, std::size_t n,
                            Precision precision = Precision::Standard);

/// Finite-n approximants from the Casorati determinants,
/// e.g. D_n = a_n (p_{n+1}(u) p_n(v) - p_n(u) p_{n+1}(v)).
NevanlinnaValue nev_determinant(const JacobiModel& model, Complex u, Complex v, std::size_t n,
                                Precision precision = Precision::Standard);

/// A(u) = A(u, 0) and friends.
inline NevanlinnaValue nev_one_var(const JacobiModel& model, Complex u, const Settings& settings) {
  return nev_series(model, u, 0.0, settings);
}

/// Residuals of the identities tying two-variable values to one-variable ones:
///   A(u,v) = A(u)C(v) - C(u)A(v)     B(u,v) = B(u)C(v) - D(u)A(v)
///   C(u,v) = A(u)D(v) - C(u)B(v)     D(u,v) = B(u)D(v) - D(u)B(v)
/// and of the expansion through an anchor v0:
///   D(u,v) = D(u,v0)C(v0,v) - B(u,v0)D(v0,v).
/// Each residual is absolute; `*_scale` gives the magnitude of the terms.
struct ReductionResiduals {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double reduction_scale = 1.0;
  double expansion = 0.0;
  double expansion_scale = 1.0;
};

ReductionResiduals reduce_two_var(const JacobiModel& model, Complex u, Complex v, Complex v0,
                                  const Settings& settings);

}  // namespace momentlab
