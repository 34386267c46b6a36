#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "hardy/error.hpp"
#include "hardy/io.hpp"

namespace hardy::cli {

namespace fs = std::filesystem;

namespace {

struct Outcome {
  Json result = Json::object();
  std::vector<std::string> mesh_hashes;
  std::vector<std::string> files;
  bool converged = true;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json params_json(const ProblemParams& p) {
  return Json{{"p", p.p()},
              {"alpha", p.alpha()},
              {"lambda", p.lambda()},
              {"sharp_constant", sharp_constant(p).value}};
}

Json domain_json(const Domain& d) {
  Json j{{"kind", d.kind()}, {"sup_delta", d.sup_delta()}, {"eta_max", d.eta_max()}};
  if (const auto* b = std::get_if<Ball>(&d.shape())) {
    j["dim"] = b->dim;
    j["radius"] = b->radius;
  } else if (const auto* a = std::get_if<Annulus>(&d.shape())) {
    j["dim"] = a->dim;
    j["inner"] = a->inner;
    j["outer"] = a->outer;
  } else {
    j["length"] = std::get<Interval>(d.shape()).length;
  }
  return j;
}

std::shared_ptr<const GradedMesh> config_mesh(const RunConfig& cfg, const Domain& domain) {
  const long n = cfg.integer("mesh.n");
  if (n < 4) throw Error(ErrorCode::BadMeshSpec, "key mesh.n must be at least 4");
  return std::make_shared<const GradedMesh>(
      build_mesh(domain, static_cast<std::size_t>(n), cfg.number("mesh.ratio")));
}

double auto_or(const RunConfig& cfg, const std::string& key, double fallback) {
  return cfg.text(key) == "auto" ? fallback : cfg.number(key);
}

Outcome cmd_trial(const RunConfig& cfg, const fs::path& dir) {
  const auto params = cfg.params();
  const long levels = cfg.integer("trial.levels");
  if (levels < 1) throw Error(ErrorCode::Config, "key trial.levels must be at least 1");
  const double eta = cfg.number("trial.eta");
  if (!(eta > 0.0)) throw Error(ErrorCode::Config, "key trial.eta must be positive");
  const auto constants = trial_constants(params);
  std::vector<std::vector<double>> rows;
  for (long k = 1; k <= levels; ++k) {
    const double s = std::ldexp(1.0, static_cast<int>(-k));
    const double beta = params.subcritical_gap() + s;
    make_trial_profile(params, beta, eta);
    rows.push_back({s, beta, trial_quotient(beta, params)});
  }
  write_csv(dir / "trial.csv", {"s", "beta", "quotient"}, rows);
  Outcome o;
  o.files = {"trial.csv"};
  o.result = Json{{"params", params_json(params)},
                  {"c_const", constants.c_const},
                  {"d_const", constants.d_const},
                  {"eta", eta},
                  {"levels", levels},
                  {"last_quotient", rows.back()[2]},
                  {"sharp_constant", sharp_constant(params).value}};
  return o;
}

Outcome cmd_minimize(const RunConfig& cfg, const fs::path& dir, int threads) {
  const auto params = cfg.params();
  const auto domain = cfg.domain();
  const auto mesh = config_mesh(cfg, domain);
  Assembler a(params, domain, mesh, threads);
  auto options = cfg.solver();
  options.threads = threads;
  MinimizeResult r;
  Json extra = Json::object();
  if (cfg.flag("solver.enrich")) {
    const double s = cfg.number("solver.enrich_s");
    const double eta = auto_or(cfg, "solver.enrich_eta", 0.5 * domain.eta_max());
    const TrialLift lift(domain, params, params.subcritical_gap() + s, eta);
    r = minimize_p2(a, options, &lift);
    extra = Json{{"beta", lift.profile().beta}, {"eta", eta}};
  } else {
    r = minimize(a, options);
  }
  write_function_csv(dir / "minimizer.csv", r.minimizer);
  Outcome o;
  o.files = {"minimizer.csv"};
  o.mesh_hashes = {mesh_hash(*mesh)};
  o.converged = r.converged;
  o.result = Json{{"params", params_json(params)},
                  {"domain", domain_json(domain)},
                  {"result", to_json(r)},
                  {"components", to_json(a.components(r.minimizer.values))},
                  {"concentration", to_json(concentration_profile(a, r.minimizer.values,
                                                                  cfg.numbers("concentration.etas")))}};
  if (!extra.empty()) o.result["enrichment"] = extra;
  return o;
}

Outcome cmd_sweep(const RunConfig& cfg, const fs::path& dir, int threads) {
  const auto params = cfg.params();
  const auto domain = cfg.domain();
  const auto mesh = config_mesh(cfg, domain);
  auto options = cfg.solver();
  options.threads = threads;
  const auto curve = j_sweep(params, domain, mesh, cfg.numbers("params.lambdas"), options,
                             cfg.flag("solver.warm_start"));
  std::vector<std::vector<double>> rows;
  Outcome o;
  for (const auto& s : curve.samples) {
    rows.push_back({s.lambda, s.j, s.converged ? 1.0 : 0.0});
    o.converged = o.converged && s.converged;
  }
  write_csv(dir / "sweep.csv", {"lambda", "j", "converged"}, rows);
  o.files = {"sweep.csv"};
  o.mesh_hashes = {curve.mesh_hash};
  o.result = Json{{"params", params_json(params)},
                  {"domain", domain_json(domain)},
                  {"curve", to_json(curve)}};
  return o;
}

Outcome cmd_lambda_star(const RunConfig& cfg, const fs::path& dir, int threads) {
  const auto params = cfg.params();
  const auto domain = cfg.domain();
  auto options = cfg.lambda_star();
  options.solver.threads = threads;
  const auto est = estimate_lambda_star(params, domain, options);
  std::vector<std::vector<double>> rows;
  for (const auto& p : est.probes) rows.push_back({p.lambda, p.j, p.drop ? 1.0 : 0.0});
  write_csv(dir / "probes.csv", {"lambda", "j", "drop"}, rows);
  Outcome o;
  o.files = {"probes.csv"};
  o.mesh_hashes = {mesh_hash(build_mesh(domain, est.deciding_elements, options.grading_ratio))};
  o.result = Json{{"params", params_json(params)},
                  {"domain", domain_json(domain)},
                  {"bracket", to_json(est)}};
  return o;
}

Outcome cmd_verify(const RunConfig& cfg, const fs::path&, int threads) {
  const auto params = cfg.params();
  const auto domain = cfg.domain();
  const auto mesh = config_mesh(cfg, domain);
  Assembler a(params, domain, mesh, threads);
  const double eta = auto_or(cfg, "verify.eta", 0.5 * domain.eta_max());
  const double lambda_lo =
      auto_or(cfg, "verify.lambda_lo", plateau_lower_bracket(params, domain, eta));
  const long size = cfg.integer("verify.corpus_size");
  const long seed = cfg.integer("verify.seed");
  const long lift_levels = cfg.integer("verify.lift_levels");
  if (size < 0 || seed < 0 || lift_levels < 0) {
    throw Error(ErrorCode::Config, "keys verify.corpus_size, verify.seed and verify.lift_levels "
                                   "must be non-negative");
  }
  auto options = cfg.solver();
  Corpus corpus = random_corpus(a, static_cast<std::size_t>(size), static_cast<std::uint64_t>(seed));
  std::vector<double> betas;
  for (long k = 1; k <= lift_levels; ++k) {
    betas.push_back(params.subcritical_gap() + std::ldexp(1.0, static_cast<int>(-k)));
  }
  corpus.append(trial_lift_corpus(a, betas, eta));
  corpus.append(iterate_corpus(a, options));
  const auto local = check_local_hardy(a, eta, corpus);
  const auto improved = check_improved(a, lambda_lo, corpus);
  const auto global = estimate_global_gamma(a, corpus);
  const auto equiv = equivalence_probe(a, eta, corpus);
  Outcome o;
  o.mesh_hashes = {mesh_hash(*mesh)};
  o.result = Json{{"params", params_json(params)},
                  {"domain", domain_json(domain)},
                  {"eta", eta},
                  {"lambda_lo", lambda_lo},
                  {"corpus_size", corpus.size()},
                  {"local_hardy", to_json(local)},
                  {"improved_hardy", to_json(improved)},
                  {"global_hardy", to_json(global)},
                  {"equivalence", to_json(equiv)}};
  return o;
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Config, path.string() + ": " + e.what());
  }
}

int cmd_report(const fs::path& in_dir, const fs::path& out_dir, std::ostream& out) {
  const Json manifest = read_json(in_dir / "manifest.json");
  const Json result = read_json(in_dir / "result.json");
  std::ostringstream text;
  text << "command: " << manifest.value("command", "?") << '\n';
  if (result.contains("params")) {
    const auto& p = result["params"];
    text << "p = " << format_double(p["p"].get<double>())
         << ", alpha = " << format_double(p["alpha"].get<double>())
         << ", sharp constant = " << format_double(p["sharp_constant"].get<double>()) << '\n';
  }
  if (result.contains("result")) {
    text << "discrete J = " << format_double(result["result"]["j_value"].get<double>())
         << (result["result"]["converged"].get<bool>() ? "" : " (not converged)") << '\n';
  }
  if (result.contains("curve")) {
    for (const auto& s : result["curve"]["samples"]) {
      text << "J(" << format_double(s["lambda"].get<double>())
           << ") = " << format_double(s["j"].get<double>()) << '\n';
    }
  }
  if (result.contains("bracket")) {
    const auto& b = result["bracket"];
    text << "lambda* in [" << format_double(b["lo"].get<double>()) << ", "
         << format_double(b["hi"].get<double>()) << "], lower end "
         << b["lo_provenance"].get<std::string>() << '\n';
  }
  for (const char* key : {"local_hardy", "improved_hardy", "global_hardy"}) {
    if (!result.contains(key)) continue;
    const auto& c = result[key];
    text << key << ": worst ratio " << format_double(c["worst_ratio"].get<double>()) << ", "
         << (c["pass"].get<bool>() ? "pass" : "FAIL") << '\n';
  }
  if (result.contains("last_quotient")) {
    text << "last trial quotient = " << format_double(result["last_quotient"].get<double>())
         << '\n';
  }
  fs::create_directories(out_dir);
  std::ofstream(out_dir / "report.txt", std::ios::binary) << text.str();
  out << text.str();
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver and checks for the weighted Hardy quotient"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir = "out";
  std::string in_dir;
  int threads = 1;
  app.add_option("--config,-c", config_path, "key = value configuration file");
  app.add_option("--set,-s", sets, "override, key=value (repeatable)");
  app.add_option("--out,-o", out_dir, "output directory");
  app.add_option("--threads,-t", threads, "worker threads")->check(CLI::Range(1, 1024));
  const char* names[] = {"trial", "minimize", "sweep", "lambda-star", "verify", "report"};
  const char* help[] = {"trial-profile quotients over a beta grid",
                        "discrete minimizer of the quotient",
                        "discrete J over a list of lambdas",
                        "bracket the threshold lambda*",
                        "inequality checks over function corpora",
                        "summarize an output directory"};
  for (int i = 0; i < 6; ++i) app.add_subcommand(names[i], help[i])->fallthrough();
  app.get_subcommand("report")->add_option("--in", in_dir, "directory to summarize")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (command == "report") {
      return cmd_report(in_dir, app.count("--out") ? fs::path(out_dir) : fs::path(in_dir), out);
    }
    RunConfig cfg;
    if (!config_path.empty()) cfg.merge_file(config_path);
    for (const auto& s : sets) cfg.set_assignment(s);
    cfg.params();  // fail early on missing or invalid exponents

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const std::string started = utc_now();
    Outcome o;
    if (command == "trial") {
      o = cmd_trial(cfg, dir);
    } else if (command == "minimize") {
      o = cmd_minimize(cfg, dir, threads);
    } else if (command == "sweep") {
      o = cmd_sweep(cfg, dir, threads);
    } else if (command == "lambda-star") {
      o = cmd_lambda_star(cfg, dir, threads);
    } else {
      o = cmd_verify(cfg, dir, threads);
    }
    {
      std::ofstream eff(dir / "effective.cfg", std::ios::binary);
      eff << cfg.effective_text();
    }
    write_json(dir / "result.json", o.result);
    o.files.insert(o.files.begin(), {"effective.cfg", "result.json"});
    Json manifest{{"tool", "hardy"},
                  {"command", command},
                  {"seeds", Json{{"solver", cfg.integer("solver.seed")},
                                 {"verify", cfg.integer("verify.seed")}}},
                  {"mesh_hashes", o.mesh_hashes},
                  {"threads", threads},
                  {"files", o.files},
                  {"converged", o.converged},
                  {"started_at", started},
                  {"finished_at", utc_now()}};
    write_json(dir / "manifest.json", manifest);
    out << o.result.dump(2) << '\n';
    if (!o.converged) {
      err << "warning: solver did not converge; outputs written\n";
      return 3;
    }
    return 0;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace hardy::cli
