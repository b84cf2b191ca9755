#pragma once

#include <random>
#include <string>
#include <vector>

#include "momentlab/jacobi.hpp"

namespace momentlab {

struct CheckLine {
  std::string suite;
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool at_least = false;  // pass means residual >= threshold instead of <=
  bool strict = false;    // with at_least: residual > threshold
  bool pass = false;
  std::string note;
};

/// identities, eigenrelation, measures, lemma31, parseval
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Unknown names raise ConfigError.
/// The output depends only on the model and the settings.
std::vector<CheckLine> run_suite(const JacobiModel& model, const std::string& suite,
                                 const Settings& settings);

std::string format_check(const CheckLine& line);

/// Uniform doubles in [lo, hi) from a fixed seed. mt19937_64 output is fixed by
/// the standard; the mapping to doubles is done here so it is too.
class UniformStream {
 public:
  explicit UniformStream(unsigned long long seed) : engine_(seed) {}
  double next(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace momentlab
