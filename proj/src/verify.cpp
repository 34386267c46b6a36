#include "hardy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hardy/error.hpp"
#include "hardy/parallel.hpp"

namespace hardy {

void Corpus::append(const Corpus& other) {
  members.insert(members.end(), other.members.begin(), other.members.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
}

Corpus random_corpus(const Assembler& assembler, std::size_t count, std::uint64_t seed) {
  Corpus c;
  for (std::size_t k = 0; k < count; ++k) {
    c.members.push_back(random_start(assembler, seed + k, -1.0, 1.0));
    c.labels.push_back("random:" + std::to_string(seed + k));
  }
  return c;
}

Corpus trial_lift_corpus(const Assembler& assembler, const std::vector<double>& betas,
                         double eta) {
  Corpus c;
  for (double beta : betas) {
    const TrialLift lift(assembler.domain(), assembler.params(), beta, eta);
    c.members.push_back(
        interpolate(assembler.domain(), assembler.mesh(), [&](double r) { return lift(r); })
            .values);
    std::ostringstream label;
    label.precision(17);
    label << "lift:beta=" << beta;
    c.labels.push_back(label.str());
  }
  return c;
}

Corpus iterate_corpus(const Assembler& assembler, const SolverOptions& options) {
  std::vector<std::vector<double>> trace;
  descend(assembler, trial_lift_start(assembler), options, &trace);
  Corpus c;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    c.members.push_back(std::move(trace[k]));
    c.labels.push_back("iterate:" + std::to_string(k));
  }
  return c;
}

const char* to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::LocalHardy: return "local_hardy";
    case InequalityKind::ImprovedHardy: return "improved_hardy";
    case InequalityKind::GlobalHardy: return "global_hardy";
  }
  return "unknown";
}

namespace {

// Per-member ratios, NaN for skipped members.
template <class Ratio>
HardyCheckResult run_check(const Assembler& assembler, const Corpus& corpus,
                           InequalityKind kind, double constant, Ratio&& ratio) {
  if (corpus.size() == 0) throw Error(ErrorCode::EmptyFunction, "empty corpus");
  Assembler serial = assembler;
  serial.set_threads(1);
  std::vector<double> ratios(corpus.size());
  parallel_for(corpus.size(), assembler.threads(),
               [&](std::size_t k) { ratios[k] = ratio(serial, corpus.members[k]); });

  HardyCheckResult r;
  r.inequality = kind;
  r.corpus_size = corpus.size();
  r.constant_used = constant;
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (std::isnan(ratios[k])) {
      ++r.skipped;
    } else {
      order.push_back(k);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ratios[a] < ratios[b]; });
  r.worst_ratio = order.empty() ? std::numeric_limits<double>::infinity() : ratios[order[0]];
  for (std::size_t i = 0; i < std::min<std::size_t>(5, order.size()); ++i) {
    r.worst_members.push_back({order[i], corpus.labels[order[i]], ratios[order[i]]});
  }
  r.pass = r.worst_ratio >= 1.0 - kRatioSlack;
  return r;
}

}  // namespace

HardyCheckResult check_local_hardy(const Assembler& assembler, double eta, const Corpus& corpus) {
  if (!(eta > 0.0 && eta < assembler.domain().eta_max())) {
    throw Error(ErrorCode::BadEta, "eta must lie in (0, eta_max)");
  }
  const double Lambda = sharp_constant(assembler.params()).value;
  return run_check(assembler, corpus, InequalityKind::LocalHardy, Lambda,
                   [&](const Assembler& a, const std::vector<double>& u) {
                     a.components(u);  // rejects u == 0
                     const auto c = a.components_within(u, eta);
                     if (!(c.mass_singular > 0.0)) return std::nan("");
                     return c.grad_term / (Lambda * c.mass_singular);
                   });
}

HardyCheckResult check_improved(const Assembler& assembler, double lambda_lo,
                                const Corpus& corpus) {
  const double Lambda = sharp_constant(assembler.params()).value;
  return run_check(assembler, corpus, InequalityKind::ImprovedHardy, lambda_lo,
                   [&](const Assembler& a, const std::vector<double>& u) {
                     const auto c = a.components(u);
                     return (c.grad_term - lambda_lo * c.mass_alpha) / (Lambda * c.mass_singular);
                   });
}

HardyCheckResult estimate_global_gamma(const Assembler& assembler, const Corpus& corpus) {
  auto r = run_check(assembler, corpus, InequalityKind::GlobalHardy, 0.0,
                     [&](const Assembler& a, const std::vector<double>& u) {
                       const auto c = a.components(u);
                       return c.grad_term / c.mass_singular;
                     });
  // the ratios above are the quotients themselves
  r.constant_used = r.worst_ratio;
  for (auto& m : r.worst_members) m.ratio = r.constant_used > 0.0 ? m.ratio / r.constant_used : 0.0;
  r.worst_ratio = r.constant_used > 0.0 ? 1.0 : 0.0;
  r.pass = r.constant_used > 0.0;
  return r;
}

EquivalenceReport equivalence_probe(const Assembler& assembler, double eta, const Corpus& corpus) {
  if (!(eta > 0.0 && eta < assembler.domain().eta_max())) {
    throw Error(ErrorCode::BadEta, "eta must lie in (0, eta_max)");
  }
  if (corpus.size() == 0) throw Error(ErrorCode::EmptyFunction, "empty corpus");
  EquivalenceReport rep;
  rep.eta = eta;
  rep.corpus_size = corpus.size();
  rep.kappa = std::numeric_limits<double>::infinity();
  rep.gamma = std::numeric_limits<double>::infinity();
  for (const auto& u : corpus.members) {
    const auto c = assembler.components(u);
    rep.gamma = std::min(rep.gamma, c.grad_term / c.mass_singular);
    const auto t = assembler.components_within(u, eta);
    if (t.mass_singular > 0.0) rep.kappa = std::min(rep.kappa, t.grad_term / t.mass_singular);
  }
  rep.kappa_positive = rep.kappa > 0.0;
  rep.gamma_positive = rep.gamma > 0.0;
  return rep;
}

}  // namespace hardy
