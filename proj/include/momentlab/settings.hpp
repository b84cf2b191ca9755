#pragma once

#include <cstddef>

namespace momentlab {

enum class Precision { Standard, Extended };

/// Numeric knobs shared by every evaluator. One record travels from the CLI
/// (or the Python module) down to the kernels so runs are reproducible from it.
struct Settings {
  Precision precision = Precision::Standard;

  // l2 tail stopping rule: stop once a window of `tail_window` consecutive
  // terms has l2 mass below rel_tol * running norm and is still decaying.
  double rel_tol = 1e-15;
  std::size_t tail_window = 8;
  std::size_t hard_cap = 10000;

  double tol_det = 1e-9;
  double tol_omega = 1e-7;
  double refinement_tol = 1e-12;
  double eps_mass = 1e-3;

  // Zero scan: uniform grid density (points per unit), log-spaced density
  // (points per octave) once the uniform grid would exceed max_uniform.
  double grid_density = 64.0;
  double log_density = 64.0;
  std::size_t max_uniform = 4097;
  std::size_t max_seeds = 1000000;

  // |C(v0)| < c_zero_tol * (1 + |A(v0)|) is treated as C(v0) = 0.
  double c_zero_tol = 1e-10;
};

}  // namespace momentlab
