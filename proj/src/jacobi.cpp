#include "momentlab/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "momentlab/errors.hpp"

namespace momentlab {

JacobiModel::JacobiModel(std::string name, std::string identity, Source source,
                         std::optional<std::size_t> max_index)
    : name_(std::move(name)),
      identity_(std::move(identity)),
      source_(std::move(source)),
      max_index_(max_index) {}

Coefficients JacobiModel::coeff(std::size_t n) const {
  if (max_index_ && n > *max_index_) throw UnavailableCoefficient(n);
  const Coefficients c = source_(n);
  if (!std::isfinite(c.a) || !std::isfinite(c.b) || !(c.a > 0.0)) throw UnavailableCoefficient(n);
  return c;
}

JacobiModel JacobiModel::shifted() const {
  auto source = source_;
  std::optional<std::size_t> max_index;
  if (max_index_) {
    if (*max_index_ == 0) throw UnavailableCoefficient(1);
    max_index = *max_index_ - 1;
  }
  return JacobiModel(name_ + "^(1)", identity_ + ";shift=1",
                     [source](std::size_t n) { return source(n + 1); }, max_index);
}

double safe_norm(std::span<const Complex> x) {
  double scale = 0.0;
  for (const auto& v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double ssq = 0.0;
  for (const auto& v : x) ssq += std::norm(v / scale);
  return scale * std::sqrt(ssq);
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  const std::size_t n = std::min(x.size(), y.size());
  Complex sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += x[k] * std::conj(y[k]);
  return sum;
}

double FiniteVector::norm() const { return safe_norm(entries); }

FiniteVector FiniteVector::unit(std::size_t n) {
  FiniteVector e;
  e.entries.assign(n + 1, 0.0);
  e.entries[n] = 1.0;
  return e;
}

double TruncatedVector::norm() const { return safe_norm(entries); }

TruncatedVector TruncatedVector::normalized() const {
  const double nrm = norm();
  if (nrm == 0.0) return *this;
  TruncatedVector out;
  out.entries.reserve(entries.size());
  for (const auto& v : entries) out.entries.push_back(v / nrm);
  out.tail_estimate = tail_estimate / nrm;
  return out;
}

TruncatedVector TruncatedVector::plus(Complex alpha, const TruncatedVector& other) const {
  TruncatedVector out;
  out.entries.assign(std::max(entries.size(), other.entries.size()), 0.0);
  for (std::size_t k = 0; k < entries.size(); ++k) out.entries[k] = entries[k];
  for (std::size_t k = 0; k < other.entries.size(); ++k) out.entries[k] += alpha * other.entries[k];
  out.tail_estimate = tail_estimate + std::abs(alpha) * other.tail_estimate;
  return out;
}

TruncatedVector TruncatedVector::scaled(Complex alpha) const {
  TruncatedVector out = *this;
  for (auto& v : out.entries) v *= alpha;
  out.tail_estimate *= std::abs(alpha);
  return out;
}

TruncatedVector TruncatedVector::unit(std::size_t n) {
  TruncatedVector e;
  e.entries.assign(n + 1, 0.0);
  e.entries[n] = 1.0;
  return e;
}

namespace {

// Streams p_n (or q_n) one index at a time in working precision Real.
template <typename Real>
class RecurrenceStream {
 public:
  using C = std::complex<Real>;

  RecurrenceStream(const JacobiModel& model, Complex z, SequenceKind kind)
      : model_(model), z_(static_cast<Real>(z.real()), static_cast<Real>(z.imag())) {
    if (kind == SequenceKind::P) {
      prev_ = C(0);
      cur_ = C(1);
    } else {
      prev_ = C(0);
      cur_ = C(0);
      q_start_ = true;
    }
  }

  // Value at the current index n.
  Complex value() const {
    return {static_cast<double>(cur_.real()), static_cast<double>(cur_.imag())};
  }

  // Advance from n to n + 1.
  void advance() {
    const Coefficients c = model_.coeff(n_);
    C next;
    if (q_start_ && n_ == 0) {
      next = C(Real(1) / static_cast<Real>(c.a));
    } else {
      next = ((z_ - static_cast<Real>(c.b)) * cur_ - a_prev_ * prev_) / static_cast<Real>(c.a);
    }
    a_prev_ = static_cast<Real>(c.a);
    prev_ = cur_;
    cur_ = next;
    ++n_;
  }

 private:
  const JacobiModel& model_;
  C z_;
  C prev_;
  C cur_;
  Real a_prev_ = 0;  // a_{n-1}, with a_{-1} = 0
  std::size_t n_ = 0;
  bool q_start_ = false;
};

template <typename Real>
std::vector<Complex> run_recurrence(const JacobiModel& model, Complex z, SequenceKind kind,
                                    std::size_t N) {
  RecurrenceStream<Real> stream(model, z, kind);
  std::vector<Complex> out;
  out.reserve(N + 1);
  out.push_back(stream.value());
  for (std::size_t n = 0; n < N; ++n) {
    stream.advance();
    out.push_back(stream.value());
  }
  return out;
}

std::vector<Complex> recurrence(const JacobiModel& model, Complex z, SequenceKind kind,
                                std::size_t N, Precision precision) {
  if (precision == Precision::Extended) return run_recurrence<long double>(model, z, kind, N);
  return run_recurrence<double>(model, z, kind, N);
}

template <typename Real>
TruncatedVector adaptive_impl(const JacobiModel& model, Complex z, SequenceKind kind,
                              const Settings& settings, std::size_t min_len) {
  const std::size_t W = std::max<std::size_t>(settings.tail_window, 1);
  RecurrenceStream<Real> stream(model, z, kind);
  std::vector<Complex> values;
  // |v|^2 in long double: entries near the top of the double range still square finitely.
  std::vector<long double> squares;
  long double total = 0;
  auto push = [&](Complex v) {
    values.push_back(v);
    const long double re = v.real(), im = v.imag();
    squares.push_back(re * re + im * im);
    total += squares.back();
  };
  auto window_sum = [&](std::size_t first, std::size_t last) {
    long double s = 0;
    for (std::size_t k = first; k < last; ++k) s += squares[k];
    return s;
  };
  push(stream.value());

  while (true) {
    const std::size_t len = values.size();
    if (len >= 2 * W && len >= min_len && total > 0) {
      const long double window = window_sum(len - W, len);
      const long double previous = window_sum(len - 2 * W, len - W);
      const long double tol = settings.rel_tol;
      if (window < tol * tol * total && window <= previous) {
        TruncatedVector out;
        out.entries = std::move(values);
        const long double ratio = previous > 0 ? window / previous : 0;
        const long double tail_ssq = ratio < 1 ? window * ratio / (1 - ratio) : window;
        out.tail_estimate = static_cast<double>(std::sqrt(tail_ssq));
        return out;
      }
    }
    if (len >= settings.hard_cap) {
      std::vector<double> partial;
      long double running = 0;
      for (std::size_t k = 0; k < len; ++k) {
        running += squares[k];
        if (((k + 1) & k) == 0) partial.push_back(static_cast<double>(std::sqrt(running)));
      }
      std::ostringstream msg;
      msg << "l2 sequence did not converge within " << settings.hard_cap
          << " terms at z = " << z << " (model may be determinate or the cap too low)";
      throw IndeterminacySuspect(msg.str(), std::move(partial));
    }
    stream.advance();
    const Complex v = stream.value();
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg << "recurrence overflow at n = " << len << " for z = " << z;
      throw IndeterminacySuspect(msg.str(), {});
    }
    push(v);
  }
}

}  // namespace

PQValues eval_pq(const JacobiModel& model, Complex z, std::size_t N, Precision precision) {
  return {recurrence(model, z, SequenceKind::P, N, precision),
          recurrence(model, z, SequenceKind::Q, N, precision)};
}

TruncatedVector adaptive_sequence(const JacobiModel& model, Complex z, SequenceKind kind,
                                  const Settings& settings, std::size_t min_len) {
  if (settings.precision == Precision::Extended)
    return adaptive_impl<long double>(model, z, kind, settings, min_len);
  return adaptive_impl<double>(model, z, kind, settings, min_len);
}

FiniteVector apply_J(const JacobiModel& model, const FiniteVector& c) {
  const std::size_t L = c.entries.size();
  FiniteVector out;
  out.entries.assign(L + 1, 0.0);
  double a_prev = 0.0;
  for (std::size_t n = 0; n <= L; ++n) {
    const Coefficients k = model.coeff(n);
    Complex v = 0.0;
    if (n >= 1 && n - 1 < L) v += a_prev * c.entries[n - 1];
    if (n < L) v += k.b * c.entries[n];
    if (n + 1 < L) v += k.a * c.entries[n + 1];
    out.entries[n] = v;
    a_prev = k.a;
  }
  return out;
}

TruncatedVector apply_J(const JacobiModel& model, const TruncatedVector& c) {
  const std::size_t L = c.entries.size();
  TruncatedVector out;
  if (L == 0) return out;
  out.entries.assign(L, 0.0);
  double a_prev = 0.0;
  for (std::size_t n = 0; n < L; ++n) {
    const Coefficients k = model.coeff(n);
    Complex v = k.b * c.entries[n];
    if (n >= 1) v += a_prev * c.entries[n - 1];
    if (n + 1 < L) v += k.a * c.entries[n + 1];
    out.entries[n] = v;
    a_prev = k.a;
  }
  const std::size_t N = L - 1;
  const Coefficients last = model.coeff(N);
  const Coefficients next = model.coeff(N + 1);
  out.tail_estimate = last.a * c.tail_estimate                              // row N
                      + last.a * std::abs(c.entries[N])                     // row N + 1
                      + (std::abs(next.b) + next.a + last.a) * c.tail_estimate;
  return out;
}

FcGcValue eval_Fc_Gc(const JacobiModel& model, const FiniteVector& c, Complex z,
                     const Settings& settings) {
  FcGcValue out{0.0, 0.0};
  if (c.entries.empty()) return out;
  const PQValues pq = eval_pq(model, z, c.entries.size() - 1, settings.precision);
  for (std::size_t n = 0; n < c.entries.size(); ++n) {
    out.F += c.entries[n] * pq.p[n];
    out.G += c.entries[n] * pq.q[n];
  }
  return out;
}

FcGcValue eval_Fc_Gc(const JacobiModel& model, const TruncatedVector& c, Complex z,
                     const Settings& settings) {
  FcGcValue out = eval_Fc_Gc(model, FiniteVector{c.entries}, z, settings);
  if (c.tail_estimate > 0.0) {
    // Cauchy-Schwarz: |sum_{n>N} c_n p_n(z)| <= tail(c) * ||p_z||.
    out.err_F = c.tail_estimate * seq_p(model, z, settings).norm();
    out.err_G = c.tail_estimate * seq_q(model, z, settings).norm();
  }
  return out;
}

namespace {

// Rows n < rows of J applied to a prefix (needs entries up to n + 1).
std::vector<Complex> exact_rows(const JacobiModel& model, const std::vector<Complex>& c,
                                std::size_t rows) {
  std::vector<Complex> out(rows, 0.0);
  double a_prev = 0.0;
  for (std::size_t n = 0; n < rows; ++n) {
    const Coefficients k = model.coeff(n);
    Complex v = k.b * c[n] + k.a * c[n + 1];
    if (n >= 1) v += a_prev * c[n - 1];
    out[n] = v;
    a_prev = k.a;
  }
  return out;
}

void require_converged(const TruncatedVector& x, const char* which) {
  const double nrm = x.norm();
  if (x.trunc_len() < 2 || !std::isfinite(nrm) || !std::isfinite(x.tail_estimate) ||
      x.tail_estimate > 1e-8 * nrm) {
    throw std::invalid_argument(std::string("boundary_form: input ") + which +
                                " is not a converged truncated vector");
  }
}

}  // namespace

Complex boundary_form(const JacobiModel& model, const TruncatedVector& c,
                      const TruncatedVector& d, const Settings& settings) {
  (void)settings;
  require_converged(c, "c");
  require_converged(d, "d");
  const std::size_t rows = std::min(c.trunc_len(), d.trunc_len()) - 1;
  const auto Jc = exact_rows(model, c.entries, rows);
  const auto Jd = exact_rows(model, d.entries, rows);
  Complex sum = 0.0;
  for (std::size_t n = 0; n < rows; ++n)
    sum += Jc[n] * std::conj(d.entries[n]) - c.entries[n] * std::conj(Jd[n]);
  return sum;
}

MembershipVerdict membership_verdict(const JacobiModel& model, const TruncatedVector& c,
                                     const Settings& settings) {
  const std::size_t L = c.trunc_len();
  TruncatedVector p0 = seq_p(model, 0.0, settings, L);
  TruncatedVector q0 = seq_q(model, 0.0, settings, L);
  MembershipVerdict out;
  out.omega_p0 = boundary_form(model, c, p0, settings);
  out.omega_q0 = boundary_form(model, c, q0, settings);
  const auto Jc = exact_rows(model, c.entries, L - 1);
  out.scale = c.norm() + safe_norm(Jc);
  out.threshold = settings.tol_omega * out.scale;
  out.member = std::abs(out.omega_p0) <= out.threshold && std::abs(out.omega_q0) <= out.threshold;
  return out;
}

IndeterminacyReport indeterminacy_check(const JacobiModel& model, const Settings& settings) {
  IndeterminacyReport report;
  try {
    const TruncatedVector p = seq_p(model, Complex(0.0, 1.0), settings);
    const TruncatedVector q = seq_q(model, Complex(0.0, 1.0), settings);
    report.norm_p_i = p.norm();
    report.norm_q_i = q.norm();
    report.terms = std::max(p.trunc_len(), q.trunc_len());
    report.indeterminate = std::isfinite(report.norm_p_i) && std::isfinite(report.norm_q_i);
    report.detail = "||p_i||, ||q_i|| converged";
  } catch (const NumericError& e) {
    report.indeterminate = false;
    report.detail = e.what();
  }
  return report;
}

}  // namespace momentlab
