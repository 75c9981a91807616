#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qp2/averaging.hpp"
#include "qp2/core.hpp"
#include "qp2/critical.hpp"
#include "qp2/elliptic_approx.hpp"
#include "qp2/errors.hpp"

namespace qp2::cli {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kRDepth = 4;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json cjson(ComplexScalar z) { return json::array({z.real(), z.imag()}); }

// Main output goes to --out when given, otherwise to the caller's stream.
class Sink {
 public:
  Sink(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
    if (path) {
      file_ = std::make_unique<std::ofstream>(*path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw ConfigError("cannot open output file " + *path);
      stream_ = file_.get();
    }
  }
  std::ostream& os() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::optional<std::string> series_path(const RunConfig& config) {
  if (config.series) return config.series;
  if (config.out) return *config.out + ".series.csv";
  return std::nullopt;
}

void write_json(std::ostream& os, const json& doc) { os << doc.dump(2) << '\n'; }

void print_warnings(const RunConfig& config, std::ostream& err) {
  for (const auto& w : warnings(config)) err << "warning: " << w << '\n';
}

void require_unit_a(const RunConfig& config) {
  if (config.a != 1.0) throw ConfigError("config: the elliptic model needs a = 1");
}

ComplexScalar config_E0(const RunConfig& config) {
  if (config.E0) return *config.E0;
  try {
    return invariant_E(config.f0, *config.f1, config.t0, config.a);
  } catch (const PoleError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json fit_json(const EllipticFit& fit) {
  json j;
  j["A"] = cjson(fit.A);
  j["beta"] = cjson(fit.beta);
  j["c"] = cjson(fit.canonical.c);
  j["gamma"] = cjson(fit.canonical.gamma);
  j["zeta"] = cjson(fit.canonical.zeta);
  j["E0"] = cjson(fit.canonical.E0);
  j["k"] = cjson(fit.k);
  j["p"] = cjson(fit.p);
  j["z0"] = cjson(fit.z0);
  j["K"] = cjson(fit.quarter);
  j["fit_mismatch"] = fit.fit_mismatch;
  const std::optional<elliptic::PeriodPair> pp = fit.periods ? fit.periods : fit.lattice;
  j["omega1"] = pp ? cjson(pp->omega1) : json(nullptr);
  j["omega2"] = pp ? cjson(pp->omega2) : json(nullptr);
  j["periods_source"] = fit.periods ? "series" : (fit.lattice ? "lattice" : "none");
  return j;
}

// Maps model-side failures to exit 3 with a diagnostic.
int model_failure(const Error& e, std::ostream& err) {
  err << "error: " << e.what();
  if (const auto* cp = dynamic_cast<const CriticalPointError*>(&e)) {
    err << " [cases:";
    for (DegenerateKind k : cp->kinds()) err << ' ' << to_string(k);
    err << (cp->ambiguous() ? ", ambiguous]" : "]");
  }
  err << '\n';
  return kExitFit;
}

struct SweepRow {
  std::string status = "ok";
  std::string model_status = "ok";
  ComplexScalar eps, f0, f1, E0{kNaN, kNaN};
  std::size_t length = 0;
  double max_dE = kNaN, dE_bound = kNaN, drift_residual = kNaN, drift_bound = kNaN;
  double fit_error = kNaN;
  std::size_t eta = 0;
  ComplexScalar measured{kNaN, kNaN}, predicted{kNaN, kNaN};
  double drift_rel = kNaN;
};

SweepRow sweep_one(const RunConfig& config, ComplexScalar eps, ComplexScalar f0, ComplexScalar f1) {
  SweepRow row;
  row.eps = eps;
  row.f0 = f0;
  row.f1 = f1;
  std::optional<Trajectory> traj;
  try {
    const QP2Params params = QP2Params::make(config.a, config.t0, eps);
    traj = iterate(params, f0, f1, config.steps, {PoleMode::truncate});
  } catch (const PoleError&) {
    row.status = "pole";
  } catch (const Error&) {
    row.status = "domain_error";
  }
  if (!traj) {
    row.model_status = "skipped";
    return row;
  }
  if (traj->truncated_at) row.status = "pole";
  row.length = traj->size();
  if (row.length == 0) {
    row.model_status = "skipped";
    return row;
  }
  row.E0 = traj->E[0];

  row.max_dE = 0.0;
  for (std::size_t n = 0; n < row.length; ++n) row.max_dE = std::max(row.max_dE, std::abs(traj->E[n] - traj->E[0]));
  const std::size_t last = row.length - 1;
  row.dE_bound = error_bound_E(last, config.t0, eps, traj->J[last]);
  const FirstOrderDrift fod = first_order_drift(*traj, last);
  row.drift_residual = std::abs(traj->E[last] - traj->E[0] - fod.drift);
  row.drift_bound = fod.M_bound;

  if (config.a != 1.0) {
    row.model_status = "a_not_1";
    return row;
  }
  try {
    const EllipticFit fit = fit_from_initial(f0, f1, config.t0);
    const std::size_t horizon = std::min(config.sweep.fit_horizon, last);
    row.fit_error = 0.0;
    for (std::size_t n = 0; n <= horizon; ++n)
      row.fit_error = std::max(row.fit_error, std::abs(predict(fit, static_cast<double>(n)) - traj->f[n]));
    DriftOptions opts;
    opts.search_depth = config.search_depth;
    opts.threshold = config.near_threshold;
    opts.R_override = config.R ? config.R : std::optional<double>(0.0);
    opts.pi.deform_contour = config.deform_contour;
    const DriftReport rep = drift_report(*traj, fit, opts);
    row.eta = rep.eta;
    row.measured = rep.measured;
    row.predicted = rep.predicted;
    row.drift_rel = rep.relative_error;
  } catch (const CriticalPointError&) {
    row.model_status = "critical";
  } catch (const DegenerateModulusError&) {
    row.model_status = "degenerate_modulus";
  } catch (const FitError&) {
    row.model_status = "fit_failed";
  } catch (const NoNearPeriodError&) {
    row.model_status = "no_near_period";
  } catch (const PoleError&) {
    row.model_status = "short_trajectory";
  } catch (const Error&) {
    row.model_status = "model_error";
  }
  return row;
}

std::string sweep_line(std::size_t index, const SweepRow& r) {
  std::ostringstream os;
  os << index << ',' << r.status << ',' << r.model_status << ',' << num(r.eps.real()) << ','
     << num(r.eps.imag()) << ',' << num(r.f0.real()) << ',' << num(r.f0.imag()) << ',' << num(r.f1.real())
     << ',' << num(r.f1.imag()) << ',' << num(r.E0.real()) << ',' << num(r.E0.imag()) << ',' << r.length << ','
     << num(r.max_dE) << ',' << num(r.dE_bound) << ',' << num(r.drift_residual) << ',' << num(r.drift_bound)
     << ',' << num(r.fit_error) << ',' << r.eta << ',' << num(r.measured.real()) << ','
     << num(r.measured.imag()) << ',' << num(r.predicted.real()) << ',' << num(r.predicted.imag()) << ','
     << num(r.drift_rel) << '\n';
  return os.str();
}

}  // namespace

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config);
  print_warnings(config, err);
  const QP2Params params = make_params(config);
  const ComplexScalar f1 = resolve_f1(config);
  Trajectory traj = [&] {
    try {
      return iterate(params, config.f0, f1, config.steps, {config.mode});
    } catch (const DomainError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }();

  Sink sink(config.out, out);
  std::ostream& os = sink.os();
  os << "n,t_re,t_im,f_re,f_im,E_re,E_im,L_re,L_im,J,pole_flag\n";
  for (std::size_t n = 0; n < traj.size(); ++n) {
    os << n << ',' << num(traj.t[n].real()) << ',' << num(traj.t[n].imag()) << ',' << num(traj.f[n].real())
       << ',' << num(traj.f[n].imag()) << ',' << num(traj.E[n].real()) << ',' << num(traj.E[n].imag()) << ','
       << num(traj.L[n].real()) << ',' << num(traj.L[n].imag()) << ',' << num(traj.J[n]) << ','
       << static_cast<int>(traj.pole_flags[n]) << '\n';
  }
  if (traj.truncated_at) {
    err << "pole: trajectory truncated at n = " << *traj.truncated_at << '\n';
    return kExitPole;
  }
  return kExitOk;
}

int cmd_approx(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config);
  require_unit_a(config);
  print_warnings(config, err);
  const QP2Params params = make_params(config);
  const ComplexScalar f1 = resolve_f1(config);

  EllipticFit fit;
  try {
    fit = fit_from_initial(config.f0, f1, config.t0);
  } catch (const PoleError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const Error& e) {
    return model_failure(e, err);
  }
  const Trajectory traj = iterate(params, config.f0, f1, config.steps, {config.mode});

  double max_all = 0.0;
  double max_even = 0.0;
  double max_odd = 0.0;
  std::ostringstream series;
  series << "n,f_sim_re,f_sim_im,f_pred_re,f_pred_im,abs_err,parity,abs_err_even,abs_err_odd\n";
  for (std::size_t n = 0; n < traj.size(); ++n) {
    ComplexScalar pred{kNaN, kNaN};
    try {
      pred = predict(fit, static_cast<double>(n));
    } catch (const PoleProximityError&) {
    }
    const double e = traj.pole_flags[n] ? kNaN : std::abs(pred - traj.f[n]);
    const bool even = n % 2 == 0;
    if (!std::isnan(e)) {
      max_all = std::max(max_all, e);
      (even ? max_even : max_odd) = std::max(even ? max_even : max_odd, e);
    }
    series << n << ',' << num(traj.f[n].real()) << ',' << num(traj.f[n].imag()) << ',' << num(pred.real()) << ','
           << num(pred.imag()) << ',' << num(e) << ',' << (even ? "even" : "odd") << ','
           << (even ? num(e) : "") << ',' << (even ? "" : num(e)) << '\n';
  }

  json report;
  report["fit"] = fit_json(fit);
  report["steps"] = config.steps;
  report["truncated_at"] = traj.truncated_at ? json(*traj.truncated_at) : json(nullptr);
  report["deviation"] = {{"max_abs_err", max_all},
                         {"max_abs_err_even", max_even},
                         {"max_abs_err_odd", max_odd},
                         {"threshold", config.fit_threshold},
                         {"within_threshold", max_all < config.fit_threshold},
                         {"horizon", traj.size() == 0 ? 0 : traj.size() - 1}};
  report["warnings"] = warnings(config);

  Sink sink(config.out, out);
  write_json(sink.os(), report);
  if (const auto path = series_path(config)) {
    std::ofstream side(*path, std::ios::binary | std::ios::trunc);
    if (!side) throw ConfigError("cannot open series file " + *path);
    side << series.str();
  }
  if (traj.truncated_at) {
    err << "pole: trajectory truncated at n = " << *traj.truncated_at << '\n';
    return kExitPole;
  }
  return kExitOk;
}

int cmd_average(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config);
  require_unit_a(config);
  print_warnings(config, err);
  const QP2Params params = make_params(config);
  const ComplexScalar f1 = resolve_f1(config);
  Sink sink(config.out, out);

  const bool stationary = config.f0 == f1 && (config.f0 == 1.0 || config.f0 == -1.0);
  if (stationary) {
    json report = {{"stationary", true},
                   {"measured", cjson(0.0)},
                   {"predicted", cjson(0.0)},
                   {"relative_error", 0.0},
                   {"R_estimate", 0.0},
                   {"s_bound", 0.0}};
    write_json(sink.os(), report);
    return kExitOk;
  }

  EllipticFit fit;
  NearPeriod period;
  try {
    fit = fit_from_initial(config.f0, f1, config.t0);
    const auto max_eta = static_cast<std::size_t>(std::floor(10.0 / std::abs(config.epsilon)));
    period = near_period(fit, config.search_depth, max_eta, config.near_threshold);
  } catch (const NoNearPeriodError& e) {
    write_json(sink.os(), {{"error", e.what()}, {"best_mismatch", e.best_mismatch()}});
    err << "error: " << e.what() << '\n';
    return kExitNoNearPeriod;
  } catch (const PoleError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const Error& e) {
    return model_failure(e, err);
  }

  const std::size_t steps = std::max(config.steps, period.eta + 2);
  const Trajectory traj = iterate(params, config.f0, f1, steps, {config.mode});
  DriftOptions opts;
  opts.search_depth = config.search_depth;
  opts.R_depth = kRDepth;
  opts.threshold = config.near_threshold;
  opts.R_override = config.R;
  opts.pi.deform_contour = config.deform_contour;
  DriftReport rep;
  try {
    rep = drift_report(traj, fit, opts);
  } catch (const PoleError& e) {
    err << "pole: " << e.what() << '\n';
    return kExitPole;
  } catch (const Error& e) {
    return model_failure(e, err);
  }

  json report = {{"stationary", false},
                 {"eta", rep.eta},
                 {"omega", cjson(rep.omega)},
                 {"m1", rep.m1},
                 {"m2", rep.m2},
                 {"omega_over_p", cjson(rep.omega_over_p)},
                 {"mismatch", rep.mismatch},
                 {"predicted", cjson(rep.predicted)},
                 {"measured", cjson(rep.measured)},
                 {"relative_error", rep.relative_error},
                 {"s_bound", rep.s_bound},
                 {"s_bound_status", "indicative"},
                 {"R_estimate", rep.R_estimate},
                 {"R_source", config.R ? "override" : "finite_difference"},
                 {"contour_deformed", config.deform_contour},
                 {"fit", fit_json(fit)}};
  write_json(sink.os(), report);
  return kExitOk;
}

int cmd_critical(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config);
  print_warnings(config, err);
  const ComplexScalar E0 = config_E0(config);
  const ComplexScalar t0 = config.t0;

  json values = json::array();
  for (const CriticalValue& cv : critical_E0_values(t0)) {
    json kinds = json::array();
    for (DegenerateKind k : cv.kinds) kinds.push_back(std::string(to_string(k)));
    values.push_back({{"kinds", kinds},
                      {"E0", cv.E0 ? cjson(*cv.E0) : json("infinity")},
                      {"vanishing_constant", cv.vanishing_constant}});
  }

  json report;
  report["t0"] = cjson(t0);
  report["E0"] = cjson(E0);
  report["critical_values"] = values;
  report["classification"] = nullptr;

  const std::optional<DegenerateCase> dc = classify(E0, t0, config.critical_tol);
  if (dc) {
    json group = json::array();
    for (DegenerateKind k : dc->group) group.push_back(std::string(to_string(k)));
    report["classification"] = {{"kind", std::string(to_string(dc->kind))},
                                {"group", group},
                                {"delta", cjson(dc->delta)},
                                {"c0", cjson(dc->c0)},
                                {"A0", dc->A0 ? cjson(*dc->A0) : json(nullptr)}};
  }

  if (dc && dc->group.size() == 1 && dc->delta != 0.0) {
    const DegenerateKind kind = dc->kind;
    try {
      const CurveModel curve = curve_model(E0, t0);
      const DegenerateCase aligned = align_to_curve(*dc, curve);
      std::ostringstream series;
      series << "z,g_full_re,g_full_im,g_deg_re,g_deg_im,abs_diff\n";
      for (double z : default_z_grid(kind)) {
        const ComplexScalar full = curve_value(curve, z);
        const ComplexScalar deg = degenerate_predict(aligned, z, t0);
        series << num(z) << ',' << num(full.real()) << ',' << num(full.imag()) << ',' << num(deg.real()) << ','
               << num(deg.imag()) << ',' << num(std::abs(full - deg)) << '\n';
      }
      if (const auto path = series_path(config)) {
        std::ofstream side(*path, std::ios::binary | std::ios::trunc);
        if (!side) throw ConfigError("cannot open series file " + *path);
        side << series.str();
      }

      const bool at_infinity = kind == DegenerateKind::K2To1_b;
      const ComplexScalar base = at_infinity ? E0 : dc->delta;
      std::vector<double> scales;
      std::vector<double> errors;
      json offsets = json::array();
      for (double factor : {1.0, 0.1, 0.01}) {
        const ComplexScalar offset = at_infinity ? base / factor : base * factor;
        const CaseGap gap = degenerate_gap(kind, t0, offset, default_z_grid(kind));
        scales.push_back(at_infinity ? 1.0 / std::abs(offset) : std::abs(offset));
        errors.push_back(gap.sup_error);
        offsets.push_back(cjson(offset));
      }
      report["convergence"] = {{"offsets", offsets},
                               {"sup_errors", errors},
                               {"orders", convergence_orders(scales, errors)},
                               {"expected_order", expected_order(kind)}};
    } catch (const Error& e) {
      report["comparison_error"] = e.what();
    }
  }

  Sink sink(config.out, out);
  write_json(sink.os(), report);
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const bool random = config.sweep.epsilons.empty();
  if (random && !config.sweep.random_runs)
    throw ConfigError("config: sweep needs 'sweep.epsilons' or 'sweep.random_runs'");
  validate(config, !random);
  print_warnings(config, err);

  struct RunInput {
    ComplexScalar eps, f0, f1;
  };
  std::vector<RunInput> inputs;
  if (!random) {
    const ComplexScalar f1 = resolve_f1(config);
    for (ComplexScalar eps : config.sweep.epsilons) inputs.push_back({eps, config.f0, f1});
  } else {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> draw(0.3, 2.0);
    for (std::size_t i = 0; i < *config.sweep.random_runs; ++i) {
      const double f0 = draw(rng);
      const double f1 = draw(rng);
      inputs.push_back({config.epsilon, f0, f1});
    }
  }

  std::vector<SweepRow> rows(inputs.size());
  const auto count = static_cast<long>(inputs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) rows[i] = sweep_one(config, inputs[i].eps, inputs[i].f0, inputs[i].f1);

  Sink sink(config.out, out);
  std::ostream& os = sink.os();
  os << "run,status,model_status,eps_re,eps_im,f0_re,f0_im,f1_re,f1_im,E0_re,E0_im,length,max_dE,"
        "dE_bound,drift_residual,drift_bound,fit_error,eta,drift_measured_re,drift_measured_im,"
        "drift_predicted_re,drift_predicted_im,drift_rel_error\n";
  bool any_ok = false;
  bool any_pole = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << sweep_line(i, rows[i]);
    any_ok = any_ok || rows[i].status == "ok";
    any_pole = any_pole || rows[i].status == "pole";
  }
  if (any_ok) return kExitOk;
  err << "error: no sweep run completed\n";
  return any_pole ? kExitPole : kExitConfig;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"q-P2 near q = 1: simulate, fit the elliptic model, compare drifts", "qp2"};
  app.require_subcommand(1);

  struct Flags {
    std::string config, epsilon, out, mode, a, t0, f0, f1, E0, series;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    int root = 0;
  } flags;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "iterate the recurrence and write the trajectory CSV"},
      {"approx", "fit the elliptic model and report the deviation"},
      {"average", "compare measured and predicted drift over a near-period"},
      {"critical", "classify E0 against the critical values"},
      {"sweep", "run an epsilon or random-seed sweep"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON config file");
    sub->add_option("--epsilon", flags.epsilon, "step parameter as RE,IM");
    sub->add_option("--steps", flags.steps, "number of steps");
    sub->add_option("--out", flags.out, "output file (default stdout)");
    sub->add_option("--seed", flags.seed, "seed for random sweeps");
    sub->add_option("--mode", flags.mode, "pole handling: truncate or skip");
    sub->add_option("--a", flags.a, "parameter a as RE,IM");
    sub->add_option("--t0", flags.t0, "base point t0 as RE,IM");
    sub->add_option("--f0", flags.f0, "initial value f0 as RE,IM");
    sub->add_option("--f1", flags.f1, "initial value f1 as RE,IM");
    sub->add_option("--E0", flags.E0, "invariant E0 as RE,IM (instead of f1)");
    sub->add_option("--root", flags.root, "root of the E0 quadratic (0 or 1)");
    sub->add_option("--series", flags.series, "side CSV path for approx/critical");
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  CLI::App* chosen = nullptr;
  std::size_t which = 0;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) {
      chosen = subs[i];
      which = i;
    }

  try {
    RunConfig config;
    if (chosen->count("--config")) load_file(config, flags.config);
    if (chosen->count("--epsilon")) config.epsilon = parse_complex(flags.epsilon, "epsilon");
    if (chosen->count("--steps")) config.steps = flags.steps;
    if (chosen->count("--out")) config.out = flags.out;
    if (chosen->count("--seed")) config.seed = flags.seed;
    if (chosen->count("--mode")) config.mode = parse_mode(flags.mode);
    if (chosen->count("--a")) config.a = parse_complex(flags.a, "a");
    if (chosen->count("--t0")) config.t0 = parse_complex(flags.t0, "t0");
    if (chosen->count("--f0")) config.f0 = parse_complex(flags.f0, "f0");
    if (chosen->count("--f1")) {
      config.f1 = parse_complex(flags.f1, "f1");
      config.E0.reset();
    }
    if (chosen->count("--E0")) {
      config.E0 = parse_complex(flags.E0, "E0");
      config.f1.reset();
    }
    if (chosen->count("--root")) config.root = flags.root;
    if (chosen->count("--series")) config.series = flags.series;

    switch (which) {
      case 0: return cmd_simulate(config, out, err);
      case 1: return cmd_approx(config, out, err);
      case 2: return cmd_average(config, out, err);
      case 3: return cmd_critical(config, out, err);
      default: return cmd_sweep(config, out, err);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PoleError& e) {
    err << "pole: " << e.what() << '\n';
    return kExitPole;
  } catch (const Error& e) {
    return model_failure(e, err);
  }
}

}  // namespace qp2::cli
