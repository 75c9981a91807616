#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qp2/core.hpp"
#include "qp2/types.hpp"

namespace qp2::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::vector<ComplexScalar> epsilons;
  std::optional<std::size_t> random_runs;
  std::size_t fit_horizon = 50;
};

struct RunConfig {
  ComplexScalar a{1.0, 0.0};
  ComplexScalar t0{1.0, 0.0};
  ComplexScalar f0{1.0, 0.0};
  ComplexScalar epsilon{1e-3, 0.0};
  std::optional<ComplexScalar> f1;
  std::optional<ComplexScalar> E0;
  int root = 0;
  std::size_t steps = 1000;
  PoleMode mode = PoleMode::truncate;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::optional<std::string> series;  // side CSV for approx / critical

  double fit_threshold = 0.05;
  int search_depth = 4;
  double near_threshold = 0.25;
  std::optional<double> R;
  double critical_tol = 1e-2;
  bool deform_contour = false;

  SweepSpec sweep;
};

// Parses a "RE,IM" or "RE" flag value.
ComplexScalar parse_complex(const std::string& text, const std::string& field);

PoleMode parse_mode(const std::string& text);

// Reads the JSON document into `config`, overwriting the fields it names.
void apply_json(RunConfig& config, const nlohmann::json& doc, const std::string& source);
void load_file(RunConfig& config, const std::string& path);

// Cross-field checks. Throws ConfigError. Random sweeps draw their own
// initial pairs and pass need_initial = false.
void validate(const RunConfig& config, bool need_initial = true);

// f1 from the config, solving the E0 quadratic when only E0 is given.
ComplexScalar resolve_f1(const RunConfig& config);

QP2Params make_params(const RunConfig& config);

// Warnings to print before running (steps |eps| > 1, ...).
std::vector<std::string> warnings(const RunConfig& config);

}  // namespace qp2::cli
