#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hardy/error.hpp"

namespace hardy::cli {

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults() {
  static const std::vector<std::pair<std::string, std::string>> d{
      {"params.p", ""},
      {"params.alpha", ""},
      {"params.lambda", "0"},
      {"params.lambdas", "-6,-4,-2,0,2,5,10,50"},
      {"domain.kind", "interval"},
      {"domain.length", "1"},
      {"domain.dim", "2"},
      {"domain.radius", "1"},
      {"domain.inner", "1"},
      {"domain.outer", "2"},
      {"mesh.n", "1024"},
      {"mesh.ratio", "0.7"},
      {"mesh.schedule", "256,1024,4096"},
      {"solver.eigen_tol", "1e-10"},
      {"solver.grad_tol", "1e-8"},
      {"solver.max_iter", "100000"},
      {"solver.starts", "3"},
      {"solver.seed", "20240611"},
      {"solver.enrich", "false"},
      {"solver.enrich_s", "1e-4"},
      {"solver.enrich_eta", "auto"},
      {"solver.warm_start", "true"},
      {"trial.levels", "20"},
      {"trial.eta", "2"},
      {"lambda_star.drop_tol", "auto"},
      {"lambda_star.width", "0.25"},
      {"lambda_star.eta", "auto"},
      {"verify.eta", "auto"},
      {"verify.lambda_lo", "auto"},
      {"verify.corpus_size", "200"},
      {"verify.seed", "7"},
      {"verify.lift_levels", "8"},
      {"concentration.etas", "0.01,0.05,0.1,0.25"},
  };
  return d;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

double parse_number(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    config_error("key " + key + ": '" + value + "' is not a number");
  }
  return x;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, value] : defaults()) k.push_back(key);
    return k;
  }();
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& [key, value] : defaults()) values_[key] = value;
}

void RunConfig::set(const std::string& key_in, const std::string& value) {
  const std::string key = trim(key_in);
  if (values_.find(key) == values_.end()) config_error("unknown key " + key);
  values_[key] = trim(value);
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) config_error("expected key=value, got '" + assignment + "'");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void RunConfig::merge_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.find('=') == std::string::npos) {
      config_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    set_assignment(line);
  }
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  merge_text(buf.str(), path);
}

bool RunConfig::has(const std::string& key) const {
  const auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

std::string RunConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error("unknown key " + key);
  if (it->second.empty()) config_error("missing required key " + key);
  return it->second;
}

double RunConfig::number(const std::string& key) const { return parse_number(key, text(key)); }

long RunConfig::integer(const std::string& key) const {
  const double x = number(key);
  if (x != static_cast<double>(static_cast<long>(x))) {
    config_error("key " + key + ": expected an integer");
  }
  return static_cast<long>(x);
}

bool RunConfig::flag(const std::string& key) const {
  const std::string v = text(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error("key " + key + ": expected true or false");
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(text(key));
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number(key, item));
  return out;
}

std::string RunConfig::effective_text() const {
  std::ostringstream out;
  for (const auto& [key, value] : values_) out << key << " = " << value << '\n';
  return out.str();
}

ProblemParams RunConfig::params() const { return params_with_lambda(number("params.lambda")); }

ProblemParams RunConfig::params_with_lambda(double lambda) const {
  return validate_params(number("params.p"), number("params.alpha"), lambda);
}

Domain RunConfig::domain() const {
  const std::string kind = text("domain.kind");
  if (kind == "interval") return Domain::interval(number("domain.length"));
  if (kind == "ball") {
    return Domain::ball(static_cast<int>(integer("domain.dim")), number("domain.radius"));
  }
  if (kind == "annulus") {
    return Domain::annulus(static_cast<int>(integer("domain.dim")), number("domain.inner"),
                           number("domain.outer"));
  }
  config_error("key domain.kind: expected interval, ball or annulus, got '" + kind + "'");
}

SolverOptions RunConfig::solver() const {
  SolverOptions o;
  o.eigen_tolerance = number("solver.eigen_tol");
  o.gradient_tolerance = number("solver.grad_tol");
  const long max_iter = integer("solver.max_iter");
  const long starts = integer("solver.starts");
  const long seed = integer("solver.seed");
  if (max_iter < 0) config_error("key solver.max_iter must be non-negative");
  if (starts < 1) config_error("key solver.starts must be at least 1");
  if (seed < 0) config_error("key solver.seed must be non-negative");
  o.max_iterations = static_cast<std::size_t>(max_iter);
  o.starts = static_cast<std::size_t>(starts);
  o.seed = static_cast<std::uint64_t>(seed);
  return o;
}

LambdaStarOptions RunConfig::lambda_star() const {
  LambdaStarOptions o;
  o.schedule.clear();
  for (double n : numbers("mesh.schedule")) {
    if (!(n >= 4) || n != static_cast<double>(static_cast<std::size_t>(n))) {
      config_error("key mesh.schedule: element counts must be integers >= 4");
    }
    o.schedule.push_back(static_cast<std::size_t>(n));
  }
  o.grading_ratio = number("mesh.ratio");
  o.drop_tolerance =
      text("lambda_star.drop_tol") == "auto" ? -1.0 : number("lambda_star.drop_tol");
  o.width = number("lambda_star.width");
  o.eta = text("lambda_star.eta") == "auto" ? -1.0 : number("lambda_star.eta");
  o.solver = solver();
  return o;
}

}  // namespace hardy::cli
