#include "momentlab/models_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <unistd.h>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_real(const std::string& field, const char* what, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last)
    throw ModelFormatError(std::string("cannot parse ") + what + " from '" + field + "'", line);
  return value;
}

std::size_t parse_index(const std::string& field, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    throw ModelFormatError("index n must be a nonnegative integer, got '" + field + "'", line);
  return value;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

JacobiModel parse_model_csv(const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  auto table = std::make_shared<std::vector<Coefficients>>();
  std::string canonical;

  while (std::getline(is, raw)) {
    ++line;
    const std::string row = trim(raw);
    if (row.empty()) continue;
    const auto fields = split_commas(row);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"n", "a", "b"})
        throw ModelFormatError("expected header 'n,a,b', got '" + row + "'", line);
      header_seen = true;
      continue;
    }
    if (fields.size() != 3)
      throw ModelFormatError("expected 3 fields (n,a,b), got " + std::to_string(fields.size()), line);
    const std::size_t n = parse_index(fields[0], line);
    const double a = parse_real(fields[1], "a_n", line);
    const double b = parse_real(fields[2], "b_n", line);
    if (n < table->size())
      throw ModelFormatError("duplicate index n = " + std::to_string(n), line);
    if (n > table->size())
      throw ModelFormatError("gap in indices: expected n = " + std::to_string(table->size()) +
                                 ", got n = " + std::to_string(n),
                             line);
    if (!std::isfinite(a) || !(a > 0.0)) throw ModelFormatError("a_n must be positive", line);
    if (!std::isfinite(b)) throw ModelFormatError("b_n must be finite", line);
    table->push_back({a, b});
    canonical += fmt17(a) + "," + fmt17(b) + ";";
  }
  if (!header_seen) throw ModelFormatError("empty coefficient file", 0);
  if (table->empty()) throw ModelFormatError("coefficient file has no rows", 0);

  const std::size_t max_index = table->size() - 1;
  return JacobiModel(origin, "table:" + hex64(fnv1a64(canonical)) + ":" + std::to_string(table->size()),
                     [table](std::size_t n) { return (*table)[n]; }, max_index);
}

JacobiModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model_csv(ss.str(), path.stem().string());
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(path.string() + ": " + e.what(), 0);
  }
}

JacobiModel builtin_geometric(double ratio, double scale, double b) {
  if (!std::isfinite(ratio) || !(ratio > 1.0))
    throw ConfigError("geometric model needs ratio > 1 (got " + fmt17(ratio) + ")");
  if (!std::isfinite(scale) || !(scale > 0.0))
    throw ConfigError("geometric model needs scale > 0 (got " + fmt17(scale) + ")");
  if (!std::isfinite(b)) throw ConfigError("geometric model needs a finite diagonal b");
  const bool standard = ratio == 2.0 && scale == 1.0 && b == 0.0;
  const std::string name =
      standard ? "geometric2" : "geometric(r=" + fmt17(ratio) + ",a0=" + fmt17(scale) + ",b=" + fmt17(b) + ")";
  const std::string identity =
      "geometric:r=" + fmt17(ratio) + ":a0=" + fmt17(scale) + ":b=" + fmt17(b);
  return JacobiModel(name, identity, [ratio, scale, b](std::size_t n) {
    return Coefficients{scale * std::pow(ratio, static_cast<double>(n)), b};
  });
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string RunManifest::canonical() const {
  const Settings& s = settings;
  std::ostringstream os;
  os << "model=" << model << "\n"
     << "precision=" << (s.precision == Precision::Extended ? "extended" : "standard") << "\n"
     << "rel_tol=" << fmt17(s.rel_tol) << "\n"
     << "tail_window=" << s.tail_window << "\n"
     << "hard_cap=" << s.hard_cap << "\n"
     << "tol_det=" << fmt17(s.tol_det) << "\n"
     << "tol_omega=" << fmt17(s.tol_omega) << "\n"
     << "refinement_tol=" << fmt17(s.refinement_tol) << "\n"
     << "eps_mass=" << fmt17(s.eps_mass) << "\n"
     << "grid_density=" << fmt17(s.grid_density) << "\n"
     << "log_density=" << fmt17(s.log_density) << "\n"
     << "max_uniform=" << s.max_uniform << "\n"
     << "max_seeds=" << s.max_seeds << "\n"
     << "c_zero_tol=" << fmt17(s.c_zero_tol) << "\n"
     << "window=" << fmt17(window.lo) << "," << fmt17(window.hi) << "\n"
     << "command=" << command << "\n";
  for (const auto& a : artifacts) os << "artifact=" << a << "\n";
  return os.str();
}

std::string RunManifest::hash() const { return hex64(fnv1a64(canonical())); }

ArtifactCache::ArtifactCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<ArtifactCache> ArtifactCache::from_env() {
  const char* dir = std::getenv("MOMENTLAB_CACHE");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return ArtifactCache(dir);
}

std::filesystem::path ArtifactCache::entry_path(const RunManifest& manifest) const {
  return dir_ / (manifest.hash() + ".json");
}

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write cache file '" + tmp.string() + "'");
    out << bytes;
    if (!out.flush()) throw ConfigError("cannot write cache file '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::optional<std::string> ArtifactCache::load(const RunManifest& manifest) const {
  const auto path = entry_path(manifest);
  auto sidecar_path = path;
  sidecar_path += ".sum";
  const auto bytes = read_file(path);
  const auto sidecar = read_file(sidecar_path);
  if (!bytes || !sidecar) return std::nullopt;

  const std::string expected = hex64(fnv1a64(*bytes)) + "\n" + manifest.canonical();
  if (sidecar->rfind(hex64(fnv1a64(*bytes)) + "\n", 0) != 0) {
    std::cerr << "warning: cache entry " << path.filename().string()
              << " failed its checksum; recomputing\n";
    return std::nullopt;
  }
  if (*sidecar != expected) return std::nullopt;  // hash collision or stale manifest
  return bytes;
}

void ArtifactCache::store(const RunManifest& manifest, const std::string& bytes) const {
  std::filesystem::create_directories(dir_);
  const auto path = entry_path(manifest);
  auto sidecar_path = path;
  sidecar_path += ".sum";
  write_atomically(path, bytes);
  write_atomically(sidecar_path, hex64(fnv1a64(bytes)) + "\n" + manifest.canonical());
}

}  // namespace momentlab
