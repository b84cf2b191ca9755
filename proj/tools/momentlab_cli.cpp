// momentlab command-line front end.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration
// error, 3 numeric failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "momentlab/density.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/models_io.hpp"
#include "momentlab/nevanlinna.hpp"
#include "momentlab/nextremal.hpp"
#include "momentlab/serialize.hpp"
#include "momentlab/verify.hpp"

using namespace momentlab;

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct RunConfig {
  std::string model = "geometric";
  double ratio = 2.0;
  double scale = 1.0;
  double b = 0.0;
  std::string precision = "standard";
  Settings settings;
  std::string window = "-8,8";
  bool window_given = false;
  std::string format = "json";
  std::string out;
  bool no_cache = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  if (t == "-inf" || t == "-infinity") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double x = std::stod(t, &used);
    if (used == t.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("cannot parse " + what + " from '" + text + "'");
}

// Accepts "x", "x,y", "(x,y)", "i", "-i", "yi", "x+yi", "x-yi".
Complex parse_complex(const std::string& text) {
  std::string t = trim(text);
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  if (const auto comma = t.find(','); comma != std::string::npos)
    return {parse_double(t.substr(0, comma), "real part"), parse_double(t.substr(comma + 1), "imaginary part")};
  if (!t.empty() && t.back() == 'i') {
    std::string body = t.substr(0, t.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    const auto imag_of = [](const std::string& s) {
      if (s.empty() || s == "+") return 1.0;
      if (s == "-") return -1.0;
      return parse_double(s, "imaginary part");
    };
    if (split == std::string::npos) return {0.0, imag_of(body)};
    return {parse_double(body.substr(0, split), "real part"), imag_of(body.substr(split))};
  }
  return {parse_double(t, "z"), 0.0};
}

Window parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("window must be 'lo,hi', got '" + text + "'");
  const Window w{parse_double(text.substr(0, comma), "window lo"), parse_double(text.substr(comma + 1), "window hi")};
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi) || !(w.lo < w.hi))
    throw ConfigError("window must be finite and nonempty, got '" + text + "'");
  return w;
}

void apply_config_entry(RunConfig& c, std::string key, const std::string& value) {
  for (auto& ch : key)
    if (ch == '-') ch = '_';
  if (key == "model") c.model = value;
  else if (key == "ratio") c.ratio = parse_double(value, key);
  else if (key == "scale") c.scale = parse_double(value, key);
  else if (key == "b") c.b = parse_double(value, key);
  else if (key == "precision") c.precision = value;
  else if (key == "rel_tol") c.settings.rel_tol = parse_double(value, key);
  else if (key == "tol_det") c.settings.tol_det = parse_double(value, key);
  else if (key == "tol_omega") c.settings.tol_omega = parse_double(value, key);
  else if (key == "refinement_tol") c.settings.refinement_tol = parse_double(value, key);
  else if (key == "eps_mass") c.settings.eps_mass = parse_double(value, key);
  else if (key == "window") {
    c.window = value;
    c.window_given = true;
  } else if (key == "format") c.format = value;
  else if (key == "cache") c.no_cache = !(value == "on" || value == "true" || value == "1");
  else throw ConfigError("unknown config key '" + key + "'");
}

void load_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string row = trim(line);
    if (row.empty() || row[0] == '#') continue;
    const auto eq = row.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(number) + ": expected key = value");
    apply_config_entry(c, trim(row.substr(0, eq)), trim(row.substr(eq + 1)));
  }
}

// --config has to be applied before the flags so the flags win.
std::optional<std::string> find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

void validate(const RunConfig& c) {
  const Settings& s = c.settings;
  for (const auto& [name, value] : {std::pair<const char*, double>{"rel_tol", s.rel_tol},
                                    {"tol_det", s.tol_det},
                                    {"tol_omega", s.tol_omega},
                                    {"refinement_tol", s.refinement_tol},
                                    {"eps_mass", s.eps_mass}}) {
    if (!std::isfinite(value) || !(value > 0.0))
      throw ConfigError(std::string(name) + " must be positive");
  }
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
  parse_window(c.window);
}

Settings settings_of(const RunConfig& c) {
  Settings s = c.settings;
  if (c.precision == "standard") s.precision = Precision::Standard;
  else if (c.precision == "extended") s.precision = Precision::Extended;
  else throw ConfigError("precision must be standard or extended");
  return s;
}

JacobiModel model_of(const RunConfig& c) {
  if (c.model == "geometric") return builtin_geometric(c.ratio, c.scale, c.b);
  return load_model(c.model);
}

void require_indeterminate(const JacobiModel& model, const Settings& s) {
  const IndeterminacyReport r = indeterminacy_check(model, s);
  if (!r.indeterminate)
    throw NumericError("model " + model.name() + " failed the indeterminacy diagnostic: " + r.detail);
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.out, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + c.out + "'");
  out << text;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Runs `compute` unless the artifact cache already holds the bytes for this manifest.
template <class F>
std::string cached(const RunConfig& c, const JacobiModel& model, const Settings& s, const Window& w,
                   const std::string& command, F compute) {
  std::optional<ArtifactCache> cache;
  if (!c.no_cache) cache = ArtifactCache::from_env();
  RunManifest manifest{model.identity(), s, w, command + " format=" + c.format, {}};
  if (cache)
    if (auto hit = cache->load(manifest)) return *hit;
  std::string bytes = compute();
  if (cache) cache->store(manifest, bytes);
  return bytes;
}

struct EvalArgs {
  std::string z = "0";
  std::size_t n = 10;
};

struct NevArgs {
  std::string u = "0";
  std::string v = "0";
};

struct SupportArgs {
  std::string which = "D";
  std::string anchor = "0";
};

struct MeasureArgs {
  std::string t = "inf";
  std::optional<double> x0;
};

struct VerifyArgs {
  std::string suite = "all";
};

struct DensityArgs {
  std::string kind = "P";
  double v0 = 0.0;
  std::size_t m_max = 40;
  std::vector<std::string> targets;
  std::size_t drop_member = 0;
  std::string csv;
};

int cmd_eval(const RunConfig& c, const EvalArgs& a) {
  const Settings s = settings_of(c);
  const JacobiModel model = model_of(c);
  const Complex z = parse_complex(a.z);
  const PQValues v = eval_pq(model, z, a.n, s.precision);
  emit(c, c.format == "csv" ? eval_csv(v, z) : eval_json(v, z));
  return 0;
}

int cmd_nevanlinna(const RunConfig& c, const NevArgs& a) {
  const Settings s = settings_of(c);
  const JacobiModel model = model_of(c);
  require_indeterminate(model, s);
  const NevanlinnaValue v = nev_series(model, parse_complex(a.u), parse_complex(a.v), s);
  emit(c, c.format == "csv" ? nevanlinna_csv(v) : nevanlinna_json(v, s));
  return 0;
}

int cmd_support(const RunConfig& c, const SupportArgs& a) {
  const Settings s = settings_of(c);
  const JacobiModel model = model_of(c);
  const ZeroTarget which = parse_zero_target(a.which);
  const double anchor = parse_double(a.anchor, "anchor");
  const Window w = parse_window(c.window);
  require_indeterminate(model, s);
  emit(c, cached(c, model, s, w, "support which=" + to_string(which) + " anchor=" + fmt17(anchor), [&] {
         const SupportSet set = find_zeros(model, which, anchor, w, s);
         return c.format == "csv" ? support_csv(set) : support_json(set);
       }));
  return 0;
}

int cmd_measure(const RunConfig& c, const MeasureArgs& a) {
  const Settings s = settings_of(c);
  const JacobiModel model = model_of(c);
  const Window w = parse_window(c.window);
  require_indeterminate(model, s);
  const std::string key = a.x0 ? "measure x0=" + fmt17(*a.x0) : "measure t=" + fmt17(parse_double(a.t, "t"));
  emit(c, cached(c, model, s, w, key, [&] {
         const DiscreteMeasure m = a.x0 ? measure_for_point(model, *a.x0, w, s)
                                        : measure_for_t(model, parse_double(a.t, "t"), w, s);
         return c.format == "csv" ? measure_csv(m) : measure_json(m);
       }));
  return 0;
}

int cmd_verify(const RunConfig& c, const VerifyArgs& a) {
  const Settings s = settings_of(c);
  const JacobiModel model = model_of(c);
  if (a.suite != "all" &&
      std::find(suite_names().begin(), suite_names().end(), a.suite) == suite_names().end())
    throw ConfigError("unknown suite '" + a.suite + "'");
  require_indeterminate(model, s);
  const std::vector<CheckLine> lines = run_suite(model, a.suite, s);
  std::string report = "model " + model.name() + ", suite " + a.suite + "\n";
  std::size_t failed = 0;
  for (const auto& line : lines) {
    report += format_check(line) + "\n";
    if (!line.pass) ++failed;
  }
  report += std::to_string(lines.size() - failed) + "/" + std::to_string(lines.size()) + " checks passed\n";
  emit(c, report);
  return failed == 0 ? 0 : kExitVerify;
}

int cmd_density(const RunConfig& c, const DensityArgs& a) {
  const Settings s = settings_of(c);
  const JacobiModel model = model_of(c);
  const FamilyKind kind = parse_family_kind(a.kind);
  std::vector<std::string> targets = a.targets;
  if (targets.empty()) targets = {"e0", "e1", "e5", "pv0"};
  for (const auto& t : targets)
    if (t == "dropped" && a.drop_member == 0) throw ConfigError("target 'dropped' needs --drop-member");
  if (a.m_max == 0) throw ConfigError("--m-max must be positive");
  require_indeterminate(model, s);

  const Window w = c.window_given ? parse_window(c.window) : window_for_members(model, kind, a.v0, a.m_max, s);
  std::string command = "density kind=" + to_string(kind) + " v0=" + fmt17(a.v0) +
                        " m_max=" + std::to_string(a.m_max) + " drop=" + std::to_string(a.drop_member) +
                        " targets=";
  for (const auto& t : targets) command += t + ";";

  std::string csv_text;
  const std::string bytes = cached(c, model, s, w, command, [&] {
    FamilySpec family = build_family(model, kind, a.v0, w, s);
    std::optional<double> dropped;
    if (a.drop_member > 0) {
      if (a.drop_member > family.zeros.size())
        throw ConfigError("--drop-member " + std::to_string(a.drop_member) + " exceeds the " +
                          std::to_string(family.zeros.size()) + " members in the window");
      dropped = family.zeros[a.drop_member - 1];
    }
    // Targets are resolved against the full family so "nearest" means member 1.
    std::vector<NamedTarget> named;
    for (const auto& t : targets) named.push_back(make_target(model, family, t, s, dropped));
    if (a.drop_member > 0) family = without_member(family, a.drop_member);
    const DensityReport report = projection_residuals(family, named, a.m_max);
    csv_text = density_csv(report);
    return c.format == "csv" ? csv_text : density_json(report);
  });
  emit(c, bytes);
  if (!a.csv.empty()) {
    if (csv_text.empty()) {
      // Cache hit: rebuild the curves from scratch for the plot file.
      RunConfig uncached = c;
      uncached.no_cache = true;
      uncached.format = "csv";
      uncached.out = a.csv;
      DensityArgs plain = a;
      plain.csv.clear();
      return cmd_density(uncached, plain);
    }
    std::ofstream out(a.csv, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + a.csv + "'");
    out << csv_text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  try {
    if (auto path = find_config_path(argc, argv)) load_config_file(config, *path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{"momentlab: numerical laboratory for indeterminate moment problems"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; flags override it");
  app.add_option("--model", config.model, "'geometric' or a CSV coefficient file (n,a,b)");
  app.add_option("--ratio", config.ratio, "geometric ratio r > 1");
  app.add_option("--scale", config.scale, "geometric a_0 > 0");
  app.add_option("--b", config.b, "geometric constant diagonal");
  app.add_option("--precision", config.precision, "standard or extended");
  app.add_option("--rel-tol", config.settings.rel_tol, "l2 tail stopping tolerance");
  app.add_option("--tol-det", config.settings.tol_det, "determinant identity tolerance");
  app.add_option("--tol-omega", config.settings.tol_omega, "boundary form tolerance");
  app.add_option("--refinement-tol", config.settings.refinement_tol, "zero refinement tolerance");
  app.add_option("--eps-mass", config.settings.eps_mass, "allowed uncaptured mass");
  auto* window_opt = app.add_option("--window", config.window, "window lo,hi (write --window=-8,8)");
  app.add_option("--format", config.format, "json or csv");
  app.add_option("--out", config.out, "write output to this file");
  app.add_flag("--no-cache", config.no_cache, "ignore MOMENTLAB_CACHE");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "p_n(z), q_n(z) for n = 0..N");
  eval->add_option("--z", eval_args.z, "point: x, x,y or x+yi");
  eval->add_option("--n", eval_args.n, "largest index N");

  NevArgs nev_args;
  auto* nev = app.add_subcommand("nevanlinna", "A, B, C, D at (u, v)");
  nev->add_option("--u", nev_args.u, "first argument");
  nev->add_option("--v", nev_args.v, "second argument (0 gives the one-variable functions)");

  SupportArgs support_args;
  auto* support = app.add_subcommand("support", "real zeros of A, B, D(., v0) or B + tD in the window");
  support->add_option("--which", support_args.which, "A, B, D or B+tD");
  support->add_option("--anchor", support_args.anchor, "v0, or t for B+tD (inf allowed)");

  MeasureArgs measure_args;
  auto* measure = app.add_subcommand("measure", "N-extremal measure mu_t restricted to the window");
  auto* t_opt = measure->add_option("--t", measure_args.t, "parameter t (inf allowed)");
  measure->add_option("--x0", measure_args.x0, "build the measure whose support contains x0")->excludes(t_opt);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("--suite", verify_args.suite, "identities, eigenrelation, measures, lemma31, parseval or all");

  DensityArgs density_args;
  auto* density = app.add_subcommand("density", "projection residuals against P, Q or M families");
  density->add_option("--kind", density_args.kind, "P, Q or M");
  density->add_option("--v0", density_args.v0, "real anchor");
  density->add_option("--m-max", density_args.m_max, "largest member count");
  density->add_option("--target", density_args.targets, "e<k>, pv0, nearest or dropped (repeatable)");
  density->add_option("--drop-member", density_args.drop_member, "remove member k (1-based)");
  density->add_option("--csv", density_args.csv, "also write the residual curves as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (window_opt->count() > 0) config.window_given = true;

  try {
    validate(config);
    if (*eval) return cmd_eval(config, eval_args);
    if (*nev) return cmd_nevanlinna(config, nev_args);
    if (*support) return cmd_support(config, support_args);
    if (*measure) return cmd_measure(config, measure_args);
    if (*verify) return cmd_verify(config, verify_args);
    if (*density) return cmd_density(config, density_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
