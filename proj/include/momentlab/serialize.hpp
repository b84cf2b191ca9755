#pragma once

#include <string>

#include "momentlab/density.hpp"
#include "momentlab/nevanlinna.hpp"
#include "momentlab/nextremal.hpp"

namespace momentlab {

// JSON renderings use a fixed key order and write t = infinity as "inf".
// Every document ends with a newline.
std::string measure_json(const DiscreteMeasure& measure);
std::string support_json(const SupportSet& support);
std::string density_json(const DensityReport& report);
std::string nevanlinna_json(const NevanlinnaValue& value, const Settings& settings);
std::string eval_json(const PQValues& values, Complex z);

// CSV renderings, numbers in %.17g.
std::string measure_csv(const DiscreteMeasure& measure);
std::string support_csv(const SupportSet& support);
std::string density_csv(const DensityReport& report);
std::string nevanlinna_csv(const NevanlinnaValue& value);
std::string eval_csv(const PQValues& values, Complex z);

/// Inverse of measure_json (used by cache round-trip tests and the Python module).
DiscreteMeasure parse_measure_json(const std::string& text);

}  // namespace momentlab
