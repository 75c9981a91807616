#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qp2/errors.hpp"

namespace qp2::cli {

namespace {

using nlohmann::json;

std::string where(const std::string& source, const std::string& field) {
  return source + ": field '" + field + "'";
}

ComplexScalar complex_from_json(const json& value, const std::string& source, const std::string& field) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
    return {value[0].get<double>(), value[1].get<double>()};
  throw ConfigError(where(source, field) + ": expected a [re, im] pair, got " + value.dump());
}

double real_from_json(const json& value, const std::string& source, const std::string& field) {
  if (!value.is_number()) throw ConfigError(where(source, field) + ": expected a number, got " + value.dump());
  return value.get<double>();
}

long long integer_from_json(const json& value, const std::string& source, const std::string& field) {
  if (!value.is_number_integer())
    throw ConfigError(where(source, field) + ": expected an integer, got " + value.dump());
  return value.get<long long>();
}

std::size_t positive_from_json(const json& value, const std::string& source, const std::string& field) {
  const long long v = integer_from_json(value, source, field);
  if (v <= 0) throw ConfigError(where(source, field) + ": must be positive");
  return static_cast<std::size_t>(v);
}

void apply_sweep(SweepSpec& sweep, const json& doc, const std::string& source) {
  if (!doc.is_object()) throw ConfigError(where(source, "sweep") + ": expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "epsilons") {
      if (!value.is_array() || value.empty())
        throw ConfigError(where(source, "sweep.epsilons") + ": expected a non-empty array");
      sweep.epsilons.clear();
      for (const auto& e : value) sweep.epsilons.push_back(complex_from_json(e, source, "sweep.epsilons"));
    } else if (key == "random_runs") {
      sweep.random_runs = positive_from_json(value, source, "sweep.random_runs");
    } else if (key == "fit_horizon") {
      sweep.fit_horizon = positive_from_json(value, source, "sweep.fit_horizon");
    } else {
      throw ConfigError(where(source, "sweep." + key) + ": unknown field");
    }
  }
}

}  // namespace

ComplexScalar parse_complex(const std::string& text, const std::string& field) {
  std::istringstream in(text);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw ConfigError("flag --" + field + ": cannot parse '" + text + "' as RE,IM");
  if (in >> comma) {
    if (comma != ',' || !(in >> im))
      throw ConfigError("flag --" + field + ": cannot parse '" + text + "' as RE,IM");
  }
  std::string rest;
  if (in >> rest) throw ConfigError("flag --" + field + ": trailing characters in '" + text + "'");
  return {re, im};
}

PoleMode parse_mode(const std::string& text) {
  if (text == "truncate") return PoleMode::truncate;
  if (text == "skip") return PoleMode::skip;
  throw ConfigError("mode must be 'truncate' or 'skip', got '" + text + "'");
}

void apply_json(RunConfig& config, const json& doc, const std::string& source) {
  if (!doc.is_object()) throw ConfigError(source + ": top level must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "a") config.a = complex_from_json(value, source, key);
    else if (key == "t0") config.t0 = complex_from_json(value, source, key);
    else if (key == "f0") config.f0 = complex_from_json(value, source, key);
    else if (key == "f1") config.f1 = complex_from_json(value, source, key);
    else if (key == "E0") config.E0 = complex_from_json(value, source, key);
    else if (key == "epsilon") config.epsilon = complex_from_json(value, source, key);
    else if (key == "root") config.root = static_cast<int>(integer_from_json(value, source, key));
    else if (key == "steps") config.steps = positive_from_json(value, source, key);
    else if (key == "seed") config.seed = static_cast<std::uint64_t>(integer_from_json(value, source, key));
    else if (key == "mode") {
      if (!value.is_string()) throw ConfigError(where(source, key) + ": expected a string");
      config.mode = parse_mode(value.get<std::string>());
    } else if (key == "out") {
      if (!value.is_string()) throw ConfigError(where(source, key) + ": expected a string");
      config.out = value.get<std::string>();
    } else if (key == "series") {
      if (!value.is_string()) throw ConfigError(where(source, key) + ": expected a string");
      config.series = value.get<std::string>();
    } else if (key == "fit_threshold") config.fit_threshold = real_from_json(value, source, key);
    else if (key == "search_depth") config.search_depth = static_cast<int>(positive_from_json(value, source, key));
    else if (key == "near_threshold") config.near_threshold = real_from_json(value, source, key);
    else if (key == "R") config.R = real_from_json(value, source, key);
    else if (key == "critical_tol") config.critical_tol = real_from_json(value, source, key);
    else if (key == "deform_contour") {
      if (!value.is_boolean()) throw ConfigError(where(source, key) + ": expected true or false");
      config.deform_contour = value.get<bool>();
    } else if (key == "sweep") apply_sweep(config.sweep, value, source);
    else throw ConfigError(where(source, key) + ": unknown field");
  }
}

void load_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  apply_json(config, doc, path);
}

void validate(const RunConfig& config, bool need_initial) {
  if (config.f1 && config.E0) throw ConfigError("config: give exactly one of f1 and E0, not both");
  if (need_initial && !config.f1 && !config.E0) throw ConfigError("config: one of f1 or E0 is required");
  if (config.root != 0 && config.root != 1) throw ConfigError("config: root must be 0 or 1");
  if (config.f0 == 0.0) throw ConfigError("config: precondition f0 != 0 violated");
  if (config.f1 && *config.f1 == 0.0) throw ConfigError("config: precondition f1 != 0 violated");
  if (config.steps < 2) throw ConfigError("config: steps must be at least 2");
  if (!(config.fit_threshold > 0.0)) throw ConfigError("config: fit_threshold must be positive");
  if (!(config.near_threshold > 0.0)) throw ConfigError("config: near_threshold must be positive");
  if (!(config.critical_tol > 0.0)) throw ConfigError("config: critical_tol must be positive");
  if (config.R && !(*config.R >= 0.0)) throw ConfigError("config: R must be nonnegative");
  try {
    make_params(config);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const ComplexScalar eps : config.sweep.epsilons) {
    if (eps == 0.0 || !(std::abs(eps) < 1.0))
      throw ConfigError("config: sweep epsilons must satisfy 0 < |epsilon| < 1");
  }
}

ComplexScalar resolve_f1(const RunConfig& config) {
  if (config.f1) return *config.f1;
  try {
    const auto roots = solve_f1_from_E0(*config.E0, config.f0, config.t0, config.a);
    return config.root == 0 ? roots.first : roots.second;
  } catch (const DegenerateError& e) {
    throw ConfigError(std::string("config: cannot solve for f1 from E0: ") + e.what());
  }
}

QP2Params make_params(const RunConfig& config) { return QP2Params::make(config.a, config.t0, config.epsilon); }

std::vector<std::string> warnings(const RunConfig& config) {
  std::vector<std::string> out;
  const double reach = static_cast<double>(config.steps) * std::abs(config.epsilon);
  if (reach > 1.0) {
    std::ostringstream msg;
    msg << "steps * |epsilon| = " << reach << " exceeds 1; the error bounds are loose in this range";
    out.push_back(msg.str());
  }
  return out;
}

}  // namespace qp2::cli
