#pragma once

#include <map>
#include <string>
#include <vector>

#include "hardy/geometry.hpp"
#include "hardy/lambda.hpp"

namespace hardy::cli {

/// Flat key=value configuration with dotted section names.  Every known
/// key has an explicit default except params.p and params.alpha.
class RunConfig {
 public:
  RunConfig();

  /// "key = value" lines; '#' starts a comment.  Unknown keys and
  /// malformed lines throw Error{Config} naming the key or line.
  void merge_text(const std::string& text, const std::string& origin);
  void merge_file(const std::string& path);
  /// "key=value".
  void set_assignment(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string text(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  /// Sorted "key = value" lines; parsing them back gives the same config.
  std::string effective_text() const;

  ProblemParams params() const;
  ProblemParams params_with_lambda(double lambda) const;
  Domain domain() const;
  SolverOptions solver() const;
  LambdaStarOptions lambda_star() const;

 private:
  std::map<std::string, std::string> values_;
};

const std::vector<std::string>& known_keys();

}  // namespace hardy::cli
