#pragma once

#include <string>
#include <vector>

#include "hardy/solve.hpp"

namespace hardy {

/// Nodal vectors on one assembler's mesh, with a label per member.
struct Corpus {
  std::vector<std::vector<double>> members;
  std::vector<std::string> labels;

  std::size_t size() const { return members.size(); }
  void append(const Corpus& other);
};

/// `count` smoothed uniform random functions on [-1, 1), seeds seed..seed+count-1.
Corpus random_corpus(const Assembler& assembler, std::size_t count, std::uint64_t seed);

/// Interpolated trial lifts h(delta) of width eta, one per beta.
Corpus trial_lift_corpus(const Assembler& assembler, const std::vector<double>& betas,
                         double eta);

/// Iterates of a descent started at the trial lift.
Corpus iterate_corpus(const Assembler& assembler, const SolverOptions& options = {});

enum class InequalityKind { LocalHardy, ImprovedHardy, GlobalHardy };
const char* to_string(InequalityKind kind);

struct MemberRatio {
  std::size_t member;
  std::string label;
  double ratio;
};

/// pass holds exactly when worst_ratio >= 1 - 1e-9.
struct HardyCheckResult {
  InequalityKind inequality;
  std::size_t corpus_size = 0;
  std::size_t skipped = 0;  // members with no mass where the check applies
  double worst_ratio = 0.0;
  double constant_used = 0.0;
  bool pass = false;
  std::vector<MemberRatio> worst_members;  // up to five, smallest ratio first
};

constexpr double kRatioSlack = 1e-9;

/// Ratio int_{delta<eta} |u'|^p delta^{alpha p} / (Lambda int_{delta<eta}
/// |u|^p delta^{(alpha-1)p}) for each member.  eta in (0, eta_max), else
/// BadEta.  Members with no singular mass inside the tube are skipped.
HardyCheckResult check_local_hardy(const Assembler& assembler, double eta, const Corpus& corpus);

/// Ratio (int |u'|^p delta^{alpha p} - lambda_lo int |u|^p delta^{alpha p})
/// / (Lambda int |u|^p delta^{(alpha-1)p}).
HardyCheckResult check_improved(const Assembler& assembler, double lambda_lo,
                                const Corpus& corpus);

/// constant_used = min over the corpus of the lambda = 0 quotient, an
/// upper estimate of the best global constant.  worst_ratio is 1 when that
/// minimum is positive and 0 otherwise.
HardyCheckResult estimate_global_gamma(const Assembler& assembler, const Corpus& corpus);

struct EquivalenceReport {
  double eta = 0.0;
  double kappa = 0.0;  // min tube quotient
  double gamma = 0.0;  // min global quotient
  bool kappa_positive = false;
  bool gamma_positive = false;
  std::size_t corpus_size = 0;
};

/// Reports both constants; no ordering between them is asserted.
EquivalenceReport equivalence_probe(const Assembler& assembler, double eta, const Corpus& corpus);

}  // namespace hardy
