#include "hardy/io.hpp"

#include <cstdio>
#include <fstream>

#include "hardy/error.hpp"

namespace hardy {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Config, "cannot write " + path.string());
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_function_csv(const std::filesystem::path& path, const DiscreteFunction& u) {
  std::vector<std::vector<double>> rows;
  rows.reserve(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) rows.push_back({u.mesh->nodes[i], u.values[i]});
  write_csv(path, {"node", "value"}, rows);
}

void write_json(const std::filesystem::path& path, const Json& value) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
}

Json to_json(const GradedMesh& mesh) {
  return Json{{"n_elements", mesh.n_elements()},
              {"grading_ratio", mesh.grading_ratio},
              {"hash", mesh_hash(mesh)}};
}

Json to_json(const QuotientComponents& c) {
  return Json{{"grad_term", c.grad_term},
              {"mass_alpha", c.mass_alpha},
              {"mass_singular", c.mass_singular}};
}

Json to_json(const MinimizeResult& r) {
  Json j{{"j_value", r.j_value},
         {"eigenvalue", r.eigenvalue},
         {"iterations", r.iterations},
         {"el_residual", r.el_residual},
         {"eigen_residual", r.eigen_residual},
         {"converged", r.converged},
         {"start_index", r.start_index}};
  j["enrichment_coefficient"] =
      r.enrichment_coefficient ? Json(*r.enrichment_coefficient) : Json(nullptr);
  if (r.minimizer.mesh) j["mesh"] = to_json(*r.minimizer.mesh);
  return j;
}

Json to_json(const ConcentrationReport& r) {
  Json rows = Json::array();
  for (const auto& [eta, fraction] : r.eta_fractions) {
    rows.push_back(Json{{"eta", eta}, {"fraction", fraction}});
  }
  return rows;
}

Json to_json(const JCurve& curve) {
  Json samples = Json::array();
  for (const auto& s : curve.samples) {
    samples.push_back(Json{{"lambda", s.lambda}, {"j", s.j}, {"converged", s.converged}});
  }
  return Json{{"n_elements", curve.n_elements},
              {"grading_ratio", curve.grading_ratio},
              {"mesh_hash", curve.mesh_hash},
              {"samples", samples}};
}

Json to_json(const LambdaStarEstimate& e) {
  Json probes = Json::array();
  for (const auto& p : e.probes) {
    probes.push_back(Json{{"lambda", p.lambda}, {"j", p.j}, {"drop", p.drop}});
  }
  return Json{{"lo", e.lo},
              {"hi", e.hi},
              {"lo_provenance", to_string(e.lo_provenance)},
              {"hi_provenance", "certified_drop"},
              {"drop_tolerance", e.drop_tolerance},
              {"plateau_bound", e.plateau_bound},
              {"j_lo", e.j_lo},
              {"j_hi", e.j_hi},
              {"deciding_elements", e.deciding_elements},
              {"probes", probes}};
}

Json to_json(const HardyCheckResult& r) {
  Json worst = Json::array();
  for (const auto& m : r.worst_members) {
    worst.push_back(Json{{"member", m.member}, {"label", m.label}, {"ratio", m.ratio}});
  }
  return Json{{"inequality", to_string(r.inequality)},
              {"corpus_size", r.corpus_size},
              {"skipped", r.skipped},
              {"worst_ratio", r.worst_ratio},
              {"constant_used", r.constant_used},
              {"pass", r.pass},
              {"worst_members", worst}};
}

Json to_json(const EquivalenceReport& r) {
  return Json{{"eta", r.eta},
              {"kappa", r.kappa},
              {"gamma", r.gamma},
              {"kappa_positive", r.kappa_positive},
              {"gamma_positive", r.gamma_positive},
              {"corpus_size", r.corpus_size}};
}

}  // namespace hardy
