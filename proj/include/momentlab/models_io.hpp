#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "momentlab/jacobi.hpp"
#include "momentlab/nextremal.hpp"
#include "momentlab/settings.hpp"

namespace momentlab {

/// Table model from CSV text with header "n,a,b". `origin` names the model.
JacobiModel parse_model_csv(const std::string& text, const std::string& origin);
JacobiModel load_model(const std::filesystem::path& path);

/// a_n = scale * ratio^n, b_n = b. Rejects ratio <= 1 and scale <= 0.
JacobiModel builtin_geometric(double ratio = 2.0, double scale = 1.0, double b = 0.0);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

struct RunManifest {
  std::string model;       // JacobiModel::identity()
  Settings settings;
  Window window;
  std::string command;     // subcommand plus every argument that affects numbers
  std::vector<std::string> artifacts;

  /// Canonical text covering every numeric input.
  std::string canonical() const;
  std::string hash() const;
};

/// Directory cache of artifact bytes keyed by manifest hash. Each entry has a
/// sidecar holding its checksum and the manifest text.
class ArtifactCache {
 public:
  explicit ArtifactCache(std::filesystem::path dir);

  /// Cache rooted at $MOMENTLAB_CACHE, or nothing when the variable is unset.
  static std::optional<ArtifactCache> from_env();

  std::optional<std::string> load(const RunManifest& manifest) const;
  void store(const RunManifest& manifest, const std::string& bytes) const;

  std::filesystem::path entry_path(const RunManifest& manifest) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace momentlab
