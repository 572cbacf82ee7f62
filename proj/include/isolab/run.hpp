#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "isolab/groups.hpp"
#include "isolab/report.hpp"

namespace isolab {

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct RunConfig {
  std::string command;     // ball | cheeger | profile | forest | betti | relsim
  std::string subcommand;  // relsim: hzero | main-check | compress
  std::string group = "F2";
  std::string gens;  // comma-separated words; empty = default generators
  int radius = 3;
  int max_size = 5;
  std::string mode = "free";
  long long samples = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::string out;  // empty or "-" = stdout
  std::string format = "json";
  bool assert_upgrade = false;  // promote informational checks to asserted
  bool with_timestamp = false;
  int jobs = 1;
  std::string sweep;  // betti: "lo:hi"
  std::optional<double> target;
  double target_tol = 0.1;

  // relsim
  long long N = 1000;
  int n = 10;
  std::string eps = "0.01";
  std::string scenario = "random";
  int trials = 20;
  long long y_size = 0;
  int k = 0;
  std::string delta;  // empty = (N - |Y|) / (n N)
};

Report run(const RunConfig& config);

// Deterministic serialization of a finished report (JSON, or CSV for the
// profile command).
std::string emit(const Report& report, const RunConfig& config);

nlohmann::json ball_to_json(const CayleyBall& ball);

}  // namespace isolab
