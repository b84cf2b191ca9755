#include "doctest.h"
#include "momentlab/models_io.hpp"
#include "momentlab/nevanlinna.hpp"
#include "momentlab/verify.hpp"
#include "oracles.hpp"

using namespace momentlab;

namespace {

const JacobiModel g2 = builtin_geometric();
const Settings defaults;

Complex to_c(oracle::CLD z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

double rel(Complex x, Complex y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); }

}  // namespace

TEST_CASE("diagonal values are exact") {
  for (Complex w : {Complex(0.0), Complex(1.5), Complex(-0.3, 2.0)}) {
    const NevanlinnaValue v = nev_series(g2, w, w, defaults);
    CHECK(v.A == Complex(0.0));
    CHECK(v.B == Complex(-1.0));
    CHECK(v.C == Complex(1.0));
    CHECK(v.D == Complex(0.0));
  }
}

TEST_CASE("series values match the direct-summation oracle") {
  const auto o = oracle::geometric2();
  UniformStream rng(5);
  for (int i = 0; i < 25; ++i) {
    const Complex u(rng.next(-4, 4), i % 3 == 0 ? rng.next(-2, 2) : 0.0);
    const Complex v(rng.next(-4, 4), 0.0);
    const NevanlinnaValue nv = nev_series(g2, u, v, defaults);
    const auto ref = oracle::nevanlinna(o, {u.real(), u.imag()}, {v.real(), v.imag()});
    CHECK(rel(nv.A, to_c(ref.A)) < 1e-11);
    CHECK(rel(nv.B, to_c(ref.B)) < 1e-11);
    CHECK(rel(nv.C, to_c(ref.C)) < 1e-11);
    CHECK(rel(nv.D, to_c(ref.D)) < 1e-11);
    CHECK(nv.err_estimate >= 0.0);
  }
}

TEST_CASE("determinant identity") {
  const NevanlinnaValue one = nev_one_var(g2, 1.0, defaults);
  CHECK(std::abs(one.det_residual()) <= defaults.tol_det);
  UniformStream rng(11);
  for (int i = 0; i < 100; ++i) {
    const NevanlinnaValue nv = nev_series(g2, rng.next(-4, 4), rng.next(-4, 4), defaults);
    CHECK(std::abs(nv.det_residual()) <= defaults.tol_det);
  }
}

TEST_CASE("D(1,0) equals the inner product of p_1 and p_0") {
  const NevanlinnaValue nv = nev_series(g2, 1.0, 0.0, defaults);
  const TruncatedVector a = seq_p(g2, 1.0, defaults), b = seq_p(g2, 0.0, defaults);
  CHECK(rel(nv.D, inner(a, b)) < 1e-13);
}

TEST_CASE("inner-product bridge for real u != v") {
  for (auto [u, v] : {std::pair{0.5, -2.0}, std::pair{3.0, 1.25}, std::pair{-7.0, 6.0}}) {
    const NevanlinnaValue nv = nev_series(g2, u, v, defaults);
    const Complex ip = inner(seq_p(g2, u, defaults), seq_p(g2, v, defaults));
    CHECK(std::abs(ip - nv.D / (u - v)) <= 1e-12 * (1 + std::abs(ip)));
  }
}

TEST_CASE("symmetry relations") {
  const Complex u(0.7, 0.3), v(-1.9, 0.0);
  const NevanlinnaValue uv = nev_series(g2, u, v, defaults), vu = nev_series(g2, v, u, defaults);
  CHECK(std::abs(uv.A + vu.A) <= 1e-13 * (1 + std::abs(uv.A)));
  CHECK(std::abs(uv.D + vu.D) <= 1e-13 * (1 + std::abs(uv.D)));
  CHECK(std::abs(uv.B + vu.C) <= 1e-13 * (1 + std::abs(uv.B)));
}

TEST_CASE("one-variable values") {
  const NevanlinnaValue at0 = nev_one_var(g2, 0.0, defaults);
  CHECK(at0.A == Complex(0.0));
  CHECK(at0.B == Complex(-1.0));
  CHECK(at0.C == Complex(1.0));
  CHECK(at0.D == Complex(0.0));
  for (double u : {-3.5, -0.2, 1.0, 2.75}) {
    const NevanlinnaValue a = nev_one_var(g2, u, defaults), b = nev_series(g2, u, 0.0, defaults);
    CHECK(a.A == b.A);
    CHECK(a.D == b.D);
    for (Complex x : {a.A, a.B, a.C, a.D}) CHECK(std::abs(x.imag()) < 1e-12);
  }
}

TEST_CASE("finite-n approximants: series and Casorati forms") {
  for (std::size_t n = 0; n <= 12; ++n) {
    const NevanlinnaValue s = nev_partial(g2, 1.0, 0.0, n);
    const NevanlinnaValue d = nev_determinant(g2, 1.0, 0.0, n);
    CHECK(rel(s.A, d.A) < 1e-10);
    CHECK(rel(s.B, d.B) < 1e-10);
    CHECK(rel(s.C, d.C) < 1e-10);
    CHECK(rel(s.D, d.D) < 1e-10);
    CHECK(std::abs(s.det_residual()) < 1e-12);
    CHECK(std::abs(nev_determinant(g2, 0.4, 0.4, n).B + 1.0) < 1e-14);
  }
  // D_0(u, v) = u - v.
  const NevanlinnaValue d0 = nev_determinant(g2, 2.5, -1.0, 0);
  CHECK(std::abs(d0.D - 3.5) < 1e-15);
  // The approximants approach the series values.
  const NevanlinnaValue full = nev_series(g2, 1.0, 0.0, defaults);
  CHECK(rel(nev_partial(g2, 1.0, 0.0, 60).B, full.B) < 1e-14);
}

TEST_CASE("two-variable reductions and the anchor expansion") {
  const ReductionResiduals at0 = reduce_two_var(g2, 1.5, 0.0, 0.0, defaults);
  CHECK(at0.D <= 1e-15 * at0.reduction_scale);
  const ReductionResiduals r = reduce_two_var(g2, 1.0, -1.0, 0.5, defaults);
  CHECK(r.A < 1e-8);
  CHECK(r.B < 1e-8);
  CHECK(r.C < 1e-8);
  CHECK(r.D < 1e-8);
  CHECK(r.expansion < 1e-8);
  const ReductionResiduals same = reduce_two_var(g2, 0.8, 0.8, 0.1, defaults);
  CHECK(same.expansion <= 1e-15 * same.expansion_scale);
}

TEST_CASE("extended tier") {
  Settings ext;
  ext.precision = Precision::Extended;
  const NevanlinnaValue a = nev_series(g2, 1.0, 0.0, ext), b = nev_series(g2, 1.0, 0.0, defaults);
  CHECK(rel(a.B, b.B) < 1e-14);
  CHECK(std::abs(a.det_residual()) < 1e-15);
}
