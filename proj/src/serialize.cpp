#include "momentlab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "momentlab/errors.hpp"

namespace momentlab {

using json = nlohmann::ordered_json;

namespace {

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x == 0.0 ? 0.0 : x;  // no "-0"
}

json number(Complex z) {
  if (z.imag() == 0.0) return number(z.real());
  return json::array({number(z.real()), number(z.imag())});
}

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

json window_json(const Window& w) { return json::array({number(w.lo), number(w.hi)}); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string g17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

double read_number(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ConfigError("unexpected string '" + s + "' where a number was expected");
  }
  return j.get<double>();
}

}  // namespace

std::string measure_json(const DiscreteMeasure& m) {
  json j;
  j["t"] = number(m.t);
  j["window"] = window_json(m.support.window);
  j["points"] = numbers(m.support.points);
  j["masses"] = numbers(m.masses);
  j["captured_mass"] = number(m.captured_mass);
  return dump(j);
}

DiscreteMeasure parse_measure_json(const std::string& text) {
  DiscreteMeasure m;
  try {
    const json j = json::parse(text);
    m.t = read_number(j.at("t"));
    m.support.which = ZeroTarget::BtD;
    m.support.anchor = m.t;
    m.support.window = {read_number(j.at("window").at(0)), read_number(j.at("window").at(1))};
    for (const auto& x : j.at("points")) m.support.points.push_back(read_number(x));
    for (const auto& x : j.at("masses")) m.masses.push_back(read_number(x));
    m.captured_mass = read_number(j.at("captured_mass"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed measure JSON: ") + e.what());
  }
  if (m.masses.size() != m.support.points.size())
    throw ConfigError("malformed measure JSON: points and masses differ in length");
  return m;
}

std::string support_json(const SupportSet& s) {
  json j;
  j["which"] = to_string(s.which);
  j["anchor"] = number(s.anchor);
  j["window"] = window_json(s.window);
  j["refinement_tol"] = number(s.refinement_tol);
  j["points"] = numbers(s.points);
  return dump(j);
}

std::string density_json(const DensityReport& r) {
  const FamilySpec& f = r.family;
  json fam;
  fam["kind"] = to_string(f.kind);
  fam["v0"] = number(f.v0);
  fam["window"] = window_json(f.member_zeros.window);
  fam["zeros"] = numbers(f.zeros);
  fam["coefficients"] = numbers(f.coefficients);
  if (f.kind == FamilyKind::M) {
    fam["branch"] = f.branch;
    fam["t0"] = number(f.t0);
  }

  json j;
  j["family"] = fam;
  j["m_values"] = r.m_values;
  json res = json::object();
  for (const auto& [name, curve] : r.residuals) res[name] = numbers(curve);
  j["residuals"] = res;
  j["gram"] = {{"min_eig", numbers(r.gram_min_eig)}, {"max_eig", numbers(r.gram_max_eig)}};
  json verdicts = json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["verdicts"] = verdicts;
  return dump(j);
}

std::string nevanlinna_json(const NevanlinnaValue& v, const Settings& settings) {
  json j;
  j["u"] = number(v.u);
  j["v"] = number(v.v);
  j["A"] = number(v.A);
  j["B"] = number(v.B);
  j["C"] = number(v.C);
  j["D"] = number(v.D);
  j["n_used"] = v.n_used;
  j["err_estimate"] = number(v.err_estimate);
  const double det = std::abs(v.det_residual());
  j["det_residual"] = number(det);
  j["det_threshold"] = number(settings.tol_det);
  j["det_pass"] = det <= settings.tol_det;
  return dump(j);
}

std::string eval_json(const PQValues& values, Complex z) {
  json j;
  j["z"] = number(z);
  json rows = json::array();
  for (std::size_t n = 0; n < values.p.size(); ++n)
    rows.push_back({{"n", n}, {"p", number(values.p[n])}, {"q", number(values.q[n])}});
  j["rows"] = rows;
  return dump(j);
}

std::string measure_csv(const DiscreteMeasure& m) {
  std::string out = "x,mass\n";
  for (std::size_t i = 0; i < m.masses.size(); ++i)
    out += g17(m.support.points[i]) + "," + g17(m.masses[i]) + "\n";
  return out;
}

std::string support_csv(const SupportSet& s) {
  std::string out = "x\n";
  for (double x : s.points) out += g17(x) + "\n";
  return out;
}

std::string density_csv(const DensityReport& r) {
  std::string out = "m";
  for (const auto& [name, curve] : r.residuals) out += "," + name;
  out += "\n";
  for (std::size_t i = 0; i < r.m_values.size(); ++i) {
    out += std::to_string(r.m_values[i]);
    for (const auto& [name, curve] : r.residuals) out += "," + g17(curve[i]);
    out += "\n";
  }
  return out;
}

std::string nevanlinna_csv(const NevanlinnaValue& v) {
  std::string out = "name,re,im\n";
  const std::pair<const char*, Complex> rows[] = {{"u", v.u}, {"v", v.v}, {"A", v.A},
                                                  {"B", v.B}, {"C", v.C}, {"D", v.D},
                                                  {"det_residual", v.det_residual()}};
  for (const auto& [name, z] : rows) out += std::string(name) + "," + g17(z.real()) + "," + g17(z.imag()) + "\n";
  return out;
}

std::string eval_csv(const PQValues& values, Complex z) {
  const bool real = z.imag() == 0.0;
  std::string out = real ? "n,p,q\n" : "n,p_re,p_im,q_re,q_im\n";
  for (std::size_t n = 0; n < values.p.size(); ++n) {
    out += std::to_string(n);
    if (real) {
      out += "," + g17(values.p[n].real()) + "," + g17(values.q[n].real());
    } else {
      out += "," + g17(values.p[n].real()) + "," + g17(values.p[n].imag()) + "," +
             g17(values.q[n].real()) + "," + g17(values.q[n].imag());
    }
    out += "\n";
  }
  return out;
}

}  // namespace momentlab
