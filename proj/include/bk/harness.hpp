#pragma once

// Experiment runner: config parsing, pipeline orchestration
// (geometry -> Gram -> kernels / envelopes / zeros), CSV + JSON persistence,
// and report aggregation.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bk/geometry.hpp"
#include "bk/poly.hpp"

namespace bk {

inline constexpr const char* kToolVersion = "1.0.0";

struct ConfigError : std::runtime_error {
  int line = 0;
  std::string field;
  ConfigError(const std::string& msg, int ln = 0, std::string fld = {})
      : std::runtime_error(msg), line(ln), field(std::move(fld)) {}
};

struct ExperimentConfig {
  std::string tag;  // kernel_growth | envelope_rate | markov | zeros_deviation
  SetSpec set;
  DensitySpec density;
  WeightSpec weight;
  std::vector<int> ks;
  int precision_bits = 0;  // 0: per-set heuristic
  std::uint64_t seed = 1;
  int trials = 100;
  std::string out_dir = "results";
  double grid_scale = 1.0;
  int workers = 0;                  // 0: hardware concurrency
  double bound_exponent = 0.0;      // kernel_growth: 0 -> ambient dimension
  std::string law = "gaussian";     // zeros_deviation: gaussian | pareto
  double law_sigma = 1.0;
  double law_r0 = 1.0;
  std::optional<ComplexLine> line;  // zeros_deviation in C^2
};

ExperimentConfig parse_config(std::istream& in, const std::string& source_name);
ExperimentConfig parse_config_file(const std::string& path);

// FNV-1a over a canonical serialization; identical configs hash identically.
std::uint64_t config_fingerprint(const ExperimentConfig& cfg);

// RFC-4180: fields with commas, quotes, or newlines get quoted.
std::string csv_escape(const std::string& field);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct RunResult {
  int exit_code = 0;  // 0 pass, 2 assertion fail, 3 numerical failure, 4 config error
  nlohmann::ordered_json summary;
  std::string csv_path, json_path;
};

RunResult run(const ExperimentConfig& cfg);

// Merge summaries into a comparison table plus plain columnar plot data.
int report(const std::vector<std::string>& record_paths, const std::string& out_dir);

}  // namespace bk
