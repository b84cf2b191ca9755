#include "momentlab/nevanlinna.hpp"

#include <algorithm>
#include <cmath>

namespace momentlab {

namespace {

template <typename Real>
Complex dot(const std::vector<Complex>& x, const std::vector<Complex>& y, std::size_t count) {
  std::complex<Real> s = 0;
  for (std::size_t k = 0; k < count; ++k)
    s += std::complex<Real>(x[k].real(), x[k].imag()) * std::complex<Real>(y[k].real(), y[k].imag());
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

Complex bilinear(const std::vector<Complex>& x, const std::vector<Complex>& y, std::size_t count,
                 Precision precision) {
  return precision == Precision::Extended ? dot<long double>(x, y, count)
                                          : dot<double>(x, y, count);
}

NevanlinnaValue from_sums(Complex u, Complex v, const PQValues& at_u, const PQValues& at_v,
                          std::size_t count, Precision precision) {
  NevanlinnaValue out;
  out.u = u;
  out.v = v;
  const Complex h = u - v;
  out.A = h * bilinear(at_u.q, at_v.q, count, precision);
  out.B = -1.0 + h * bilinear(at_u.p, at_v.q, count, precision);
  out.C = 1.0 + h * bilinear(at_u.q, at_v.p, count, precision);
  out.D = h * bilinear(at_u.p, at_v.p, count, precision);
  out.n_used = count - 1;
  return out;
}

}  // namespace

NevanlinnaValue nev_series(const JacobiModel& model, Complex u, Complex v,
                           const Settings& settings) {
  const TruncatedVector pu = seq_p(model, u, settings);
  const TruncatedVector qu = seq_q(model, u, settings);
  const TruncatedVector pv = seq_p(model, v, settings);
  const TruncatedVector qv = seq_q(model, v, settings);
  const std::size_t L =
      std::max({pu.trunc_len(), qu.trunc_len(), pv.trunc_len(), qv.trunc_len()});

  const PQValues at_u = eval_pq(model, u, L - 1, settings.precision);
  const PQValues at_v = eval_pq(model, v, L - 1, settings.precision);
  NevanlinnaValue out = from_sums(u, v, at_u, at_v, L, settings.precision);

  const double h = std::abs(u - v);
  const double npu = pu.norm(), nqu = qu.norm(), npv = pv.norm(), nqv = qv.norm();
  out.err_estimate = h * std::max({pu.tail_estimate * pv.tail_estimate,
                                   pu.tail_estimate * qv.tail_estimate,
                                   qu.tail_estimate * pv.tail_estimate,
                                   qu.tail_estimate * qv.tail_estimate});
  out.scale = 1.0 + h * std::max({npu * npv, npu * nqv, nqu * npv, nqu * nqv});
  return out;
}

NevanlinnaValue nev_partial(const JacobiModel& model, Complex u, Complex v, std::size_t n,
                            Precision precision) {
  const PQValues at_u = eval_pq(model, u, n, precision);
  const PQValues at_v = eval_pq(model, v, n, precision);
  NevanlinnaValue out = from_sums(u, v, at_u, at_v, n + 1, precision);
  double mag = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    mag = std::max({mag, std::abs(at_u.p[k] * at_v.p[k]), std::abs(at_u.p[k] * at_v.q[k]),
                    std::abs(at_u.q[k] * at_v.p[k]), std::abs(at_u.q[k] * at_v.q[k])});
  }
  out.scale = 1.0 + std::abs(u - v) * mag * static_cast<double>(n + 1);
  return out;
}

NevanlinnaValue nev_determinant(const JacobiModel& model, Complex u, Complex v, std::size_t n,
                                Precision precision) {
  const PQValues x = eval_pq(model, u, n + 1, precision);
  const PQValues y = eval_pq(model, v, n + 1, precision);
  const double a = model.coeff(n).a;
  NevanlinnaValue out;
  out.u = u;
  out.v = v;
  out.n_used = n;
  out.A = a * (x.q[n + 1] * y.q[n] - x.q[n] * y.q[n + 1]);
  out.B = a * (x.p[n + 1] * y.q[n] - x.p[n] * y.q[n + 1]);
  out.C = a * (x.q[n + 1] * y.p[n] - x.q[n] * y.p[n + 1]);
  out.D = a * (x.p[n + 1] * y.p[n] - x.p[n] * y.p[n + 1]);
  out.scale = 1.0 + a * std::max({std::abs(x.p[n + 1] * y.p[n]), std::abs(x.p[n] * y.p[n + 1]),
                                   std::abs(x.q[n + 1] * y.q[n]), std::abs(x.q[n] * y.q[n + 1]),
                                   std::abs(x.p[n + 1] * y.q[n]), std::abs(x.p[n] * y.q[n + 1]),
                                   std::abs(x.q[n + 1] * y.p[n]), std::abs(x.q[n] * y.p[n + 1])});
  return out;
}

ReductionResiduals reduce_two_var(const JacobiModel& model, Complex u, Complex v, Complex v0,
                                  const Settings& settings) {
  const NevanlinnaValue uv = nev_series(model, u, v, settings);
  const NevanlinnaValue a = nev_one_var(model, u, settings);
  const NevanlinnaValue b = nev_one_var(model, v, settings);

  ReductionResiduals r;
  r.A = std::abs(uv.A - (a.A * b.C - a.C * b.A));
  r.B = std::abs(uv.B - (a.B * b.C - a.D * b.A));
  r.C = std::abs(uv.C - (a.A * b.D - a.C * b.B));
  r.D = std::abs(uv.D - (a.B * b.D - a.D * b.B));
  r.reduction_scale = std::max({uv.scale, a.scale * b.scale});

  const NevanlinnaValue u_v0 = nev_series(model, u, v0, settings);
  const NevanlinnaValue v0_v = nev_series(model, v0, v, settings);
  r.expansion = std::abs(uv.D - (u_v0.D * v0_v.C - u_v0.B * v0_v.D));
  r.expansion_scale = std::max(uv.scale, u_v0.scale * v0_v.scale);
  return r;
}

}  // namespace momentlab
