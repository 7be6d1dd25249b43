#ifndef DYNCO_CLI_HPP
#define DYNCO_CLI_HPP

// Command-line front end. `run_cli` parses argv, dispatches and maps failures
// to exit codes: 1 parse, 2 validation or dimension, 3 solver.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynco/io.hpp"
#include "dynco/sdp/pre_processed.hpp"
#include "dynco/search.hpp"
#include "dynco/verify.hpp"

namespace dynco::cli {

using Json = nlohmann::ordered_json;

enum class ExitCode { ok = 0, parse = 1, validation = 2, solver = 3 };

struct RunConfig {
  std::string command;
  std::string channel_uri = "hadamard";
  double lambda = 0.5;
  std::vector<double> phi{2.0 * std::numbers::pi / 3.0, 0.0};
  double tol = 1e-8;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output_path;
  std::string format;  // json | csv; empty = command default
  bool full_sign_enumeration = true;
  std::vector<double> lambdas{0.5, 0.6, 0.75, 0.9};
  std::size_t p1_steps = 51;
  std::size_t trials = 100000;

  void validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("tol must be positive");
    if (threads < 1) throw ValidationError("threads must be >= 1");
    for (double p : phi) {
      if (!std::isfinite(p)) throw ValidationError("phi entries must be finite");
    }
    for (double l : lambdas) {
      if (!(l >= 0.0 && l <= 1.0)) throw ValidationError("lambdas must lie in [0, 1]");
    }
    if (p1_steps < 2) throw ValidationError("p1-steps must be >= 2");
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (format != "json" && format != "csv") throw ValidationError("format must be json or csv");
    if (format == "csv" && command != "sweep") throw ValidationError("csv output is only available for sweep");
  }
};

inline Json config_json(const RunConfig& rc) {
  Json j;
  j["command"] = rc.command;
  j["channel"] = rc.channel_uri;
  j["lambda"] = rc.lambda;
  j["phi"] = rc.phi;
  j["tol"] = rc.tol;
  j["seed"] = rc.seed;
  j["threads"] = rc.threads;
  j["out"] = rc.output_path;
  j["format"] = rc.format;
  j["sign_enumeration"] = rc.full_sign_enumeration ? "full" : "halved";
  j["lambdas"] = rc.lambdas;
  j["p1_steps"] = rc.p1_steps;
  j["trials"] = rc.trials;
  return j;
}

/// x in fixed notation with 12 significant digits. Decimals stop at 15, so
/// magnitudes below solver noise print as zero.
inline std::string fixed12(double x) {
  constexpr int kMaxDecimals = 15;
  int decimals = 11;
  if (x != 0.0) {
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(x)))) + 1;
    decimals = std::clamp(12 - magnitude, 0, kMaxDecimals);
  }
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << x;
  std::string s = os.str();
  if (s.front() == '-' && s.find_first_of("123456789") == std::string::npos) s.erase(0, 1);
  return s;
}

inline bool all_numbers_finite(const Json& j) {
  if (j.is_number_float()) return std::isfinite(j.get<double>());
  if (j.is_structured()) {
    for (const auto& e : j) {
      if (!all_numbers_finite(e)) return false;
    }
  }
  return true;
}

inline EvaluateOptions evaluate_options(const RunConfig& rc) {
  EvaluateOptions eo;
  eo.threads = rc.threads;
  eo.enumeration = rc.full_sign_enumeration ? SignEnumeration::full : SignEnumeration::halved;
  eo.solver.gap_tol = rc.tol;
  return eo;
}

inline SearchBudget search_budget(const RunConfig& rc) {
  SearchBudget b;
  b.rng_seed = rc.seed;
  return b;
}

inline Json measure_json(const MeasureReport& rep, const GameConfig& cfg) {
  Json j;
  j["value"] = rep.value;
  j["f_value"] = rep.f_value;
  j["prior_gap"] = cfg.prior_gap();
  j["success_probability"] = 0.5 + 0.5 * (rep.value + cfg.prior_gap());
  j["sign_vectors"] = rep.sign_vectors;
  j["per_sign_values"] = rep.per_sign_values;
  j["winning_index"] = rep.winning_index;
  j["max_duality_gap"] = rep.max_duality_gap;
  j["verification_residual"] = rep.verification_residual;
  Json ex;
  ex["sigma_diag"] = rep.extraction.sigma_diag;
  ex["psd_repair"] = rep.extraction.psd_repair;
  if (rep.extraction.rho_opt) ex["rho_opt"] = Json(matrix_to_json(rep.extraction.rho_opt->matrix()));
  if (rep.extraction.phi_opt) ex["phi_opt"] = Json(channel_to_json(*rep.extraction.phi_opt));
  j["extraction"] = std::move(ex);
  return j;
}

inline Json run_measure_pre(const RunConfig& rc) {
  const Channel theta = resolve_channel(rc.channel_uri);
  const GameConfig cfg(rc.lambda, rc.phi);
  return measure_json(evaluate_f(theta, cfg, evaluate_options(rc)), cfg);
}

inline Json run_measure_post(const RunConfig& rc) {
  const Channel theta = resolve_channel(rc.channel_uri);
  const GameConfig cfg(rc.lambda, rc.phi);
  sdp::SolverOptions so;
  so.gap_tol = rc.tol;
  const auto res = post_processed_search(theta, cfg, search_budget(rc), so);
  Json j;
  j["value"] = res.value;
  j["lower_bound"] = true;
  j["prior_gap"] = cfg.prior_gap();
  j["best_input"] = res.best_input;
  std::size_t steps = 0;
  for (const auto& t : res.trajectories) steps += t.size() - 1;
  j["runs"] = res.trajectories.size();
  j["ascent_steps"] = steps;
  if (res.best_psi) j["psi_opt"] = Json(channel_to_json(*res.best_psi));
  return j;
}

inline Json run_classify(const RunConfig& rc) {
  const LinearMap map = resolve_map(rc.channel_uri);
  Json j;
  j["dim_in"] = map.dim_in();
  j["dim_out"] = map.dim_out();
  const bool cptp = is_cptp(map, rc.tol);
  // A map that is not a channel belongs to neither free class.
  j["cptp"] = cptp;
  j["detection_incoherent"] = cptp && detection_defect(map) <= rc.tol;
  j["mio"] = cptp && creation_defect(map) <= rc.tol;
  j["detection_defect"] = detection_defect(map);
  j["creation_defect"] = creation_defect(map);
  return j;
}

inline std::vector<SweepRow> run_sweep_rows(const RunConfig& rc) {
  return faithfulness_sweep(rc.lambdas, unit_grid(rc.p1_steps), rc.phi, evaluate_options(rc));
}

inline Json run_game(const RunConfig& rc) {
  const Channel theta = resolve_channel(rc.channel_uri);
  const GameConfig cfg(rc.lambda, rc.phi);
  const auto rep = evaluate_f(theta, cfg, evaluate_options(rc));
  const auto pipe = optimal_pipeline(theta, cfg, rep.extraction);
  const auto g = monte_carlo_game(theta, pipe.phi_pre, pipe.rho, pipe.povm, cfg, rc.trials, rc.seed, rc.threads);
  Json j;
  j["trials"] = g.trials;
  j["successes"] = g.successes;
  j["empirical_rate"] = g.empirical_rate;
  j["predicted_rate"] = g.predicted_rate;
  j["z_score"] = g.z_score;
  j["measure_value"] = rep.value;
  return j;
}

inline Json run_counterexample(const RunConfig& rc) {
  const auto ce = swap_counterexample(search_budget(rc));
  const GameConfig cfg = counterexample_config();
  const Channel theta = counterexample_channel();
  const auto eo = evaluate_options(rc);
  Json j;
  j["l_before"] = ce.l_before;
  j["l_after"] = ce.l_after;
  j["f_before"] = evaluate_f(theta, cfg, eo).f_value;
  j["f_after"] = evaluate_f(compose(theta, swap(2, 2)), cfg, eo).f_value;
  return j;
}

inline Json run_verify(const RunConfig& rc, bool& all_passed) {
  VerifyOptions vo;
  vo.seed = rc.seed;
  vo.threads = rc.threads;
  vo.enumeration = rc.full_sign_enumeration ? SignEnumeration::full : SignEnumeration::halved;
  Json props = Json::array();
  all_passed = true;
  for (const auto& p : run_verification(vo)) {
    Json e;
    e["name"] = p.name;
    e["passed"] = p.passed;
    e["metric"] = p.metric;
    e["tolerance"] = p.tolerance;
    props.push_back(std::move(e));
    all_passed = all_passed && p.passed;
  }
  Json j;
  j["all_passed"] = all_passed;
  j["properties"] = std::move(props);
  return j;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string s = "lambda,p1,M\n";
  for (const auto& r : rows) s += fixed12(r.lambda) + "," + fixed12(r.p1) + "," + fixed12(r.m) + "\n";
  return s;
}

inline std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

inline int fail(std::ostream& err, ExitCode code, const char* kind, const std::string& message) {
  err << "dynco: error=" << kind << " exit=" << static_cast<int>(code) << " message=" << std::quoted(one_line(message))
      << "\n";
  return static_cast<int>(code);
}

/// Executes a resolved configuration, writing the report to `out` (or the --out file).
inline int run(RunConfig rc, std::ostream& out, std::ostream& err) {
  try {
    if (rc.format.empty()) rc.format = rc.command == "sweep" ? "csv" : "json";
    rc.validate();
    std::string payload;
    int code = 0;
    if (rc.command == "sweep" && rc.format == "csv") {
      payload = sweep_csv(run_sweep_rows(rc));
    } else {
      Json report;
      report["config"] = config_json(rc);
      if (rc.command == "measure-pre") {
        report["result"] = run_measure_pre(rc);
      } else if (rc.command == "measure-post") {
        report["result"] = run_measure_post(rc);
      } else if (rc.command == "classify") {
        report["result"] = run_classify(rc);
      } else if (rc.command == "sweep") {
        Json rows = Json::array();
        for (const auto& r : run_sweep_rows(rc)) rows.push_back({{"lambda", r.lambda}, {"p1", r.p1}, {"M", r.m}});
        report["result"] = {{"rows", std::move(rows)}};
      } else if (rc.command == "game") {
        report["result"] = run_game(rc);
      } else if (rc.command == "counterexample") {
        report["result"] = run_counterexample(rc);
      } else if (rc.command == "verify") {
        bool ok = true;
        report["result"] = run_verify(rc, ok);
        if (!ok) code = static_cast<int>(ExitCode::solver);
      } else {
        return fail(err, ExitCode::parse, "parse", "unknown command '" + rc.command + "'");
      }
      if (!all_numbers_finite(report)) throw SolverError("non-finite number in report");
      payload = report.dump(2) + "\n";
    }
    if (rc.output_path.empty()) {
      out << payload;
    } else {
      std::ofstream file(rc.output_path, std::ios::binary);
      if (!file) throw ValidationError("cannot open output file '" + rc.output_path + "'");
      file << payload;
    }
    if (code != 0) return fail(err, ExitCode::solver, "verify", "one or more properties failed");
    return 0;
  } catch (const ParseError& e) {
    return fail(err, ExitCode::parse, "parse", e.what());
  } catch (const SolverError& e) {
    return fail(err, ExitCode::solver, "solver", e.what());
  } catch (const DimensionError& e) {
    return fail(err, ExitCode::validation, "dimension", e.what());
  } catch (const ValidationError& e) {
    return fail(err, ExitCode::validation, "validation", e.what());
  } catch (const std::exception& e) {
    return fail(err, ExitCode::solver, "internal", e.what());
  }
}

/// argv -> RunConfig -> run.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Coherence detection and creation measures for quantum channels", "dynco"};
  app.require_subcommand(1);
  RunConfig rc;
  std::string phi_text;
  std::string lambdas_text;
  bool halve = false;
  bool full = false;

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"measure-pre", "pre-processed improvement via the sign-vector SDPs"},
      {"measure-post", "lower bound on the post-processed improvement"},
      {"classify", "CPTP, detection-incoherent and MIO membership"},
      {"sweep", "M over lambda and the Hadamard mixing weight p1"},
      {"game", "Monte-Carlo simulation of the phase-guessing game"},
      {"counterexample", "no-pre-processing functional before and after a subsystem swap"},
      {"verify", "seeded property checks"},
  };
  for (const auto& s : commands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--channel", rc.channel_uri, "built-in name or channel JSON file");
    sub->add_option("--lambda", rc.lambda, "prior probability that no phase is applied");
    sub->add_option("--phi", phi_text, "phases in radians, comma separated");
    sub->add_option("--tol", rc.tol, "solver gap / membership tolerance");
    sub->add_option("--seed", rc.seed, "random seed");
    sub->add_option("--threads", rc.threads, "worker threads");
    sub->add_option("--out", rc.output_path, "output file (default stdout)");
    sub->add_option("--format", rc.format, "json or csv");
    auto* f = sub->add_flag("--full-sign-enumeration", full, "solve all 2^N sign-vector programs (default)");
    auto* h = sub->add_flag("--halve-sign-vectors", halve, "solve only sign vectors with a leading +1");
    f->excludes(h);
    sub->add_option("--lambdas", lambdas_text, "sweep: lambda values, comma separated");
    sub->add_option("--p1-steps", rc.p1_steps, "sweep: number of p1 grid points on [0, 1]");
    sub->add_option("--trials", rc.trials, "game: number of rounds");
    sub->callback([&rc, name = std::string(s.name)] { rc.command = name; });
  }

  try {
    app.parse(argc, argv);
    if (!phi_text.empty()) rc.phi = parse_real_list(phi_text, "--phi");
    if (!lambdas_text.empty()) rc.lambdas = parse_real_list(lambdas_text, "--lambdas");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail(err, ExitCode::parse, "parse", e.what());
  } catch (const ParseError& e) {
    return fail(err, ExitCode::parse, "parse", e.what());
  }
  rc.full_sign_enumeration = !halve;
  return run(rc, out, err);
}

}  // namespace dynco::cli

#endif  // DYNCO_CLI_HPP
