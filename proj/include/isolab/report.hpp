#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isolab/rational.hpp"

namespace isolab {

inline constexpr const char* kToolVersion = "isolab 0.1.0";

struct Check {
  std::string name;
  bool asserted = true;
  bool passed = false;
  nlohmann::json values;
};

struct Report {
  nlohmann::json config;
  std::string version = kToolVersion;
  std::optional<std::string> timestamp;
  std::vector<Check> checks;
  nlohmann::json payload;

  bool all_asserted_passed() const {
    for (const auto& c : checks)
      if (c.asserted && !c.passed) return false;
    return true;
  }
  nlohmann::json to_json() const;
};

nlohmann::json rational_json(const Rational& r);

// Deterministic serialization: keys sorted (nlohmann objects are map-backed),
// doubles printed with 12 significant digits, 2-space indent.
std::string dump_json(const nlohmann::json& j);
std::string format_double(double v);

}  // namespace isolab
