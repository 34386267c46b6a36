#pragma once

#include <array>
#include <memory>
#include <vector>

#include "hardy/core.hpp"
#include "hardy/geometry.hpp"
#include "hardy/mesh.hpp"
#include "hardy/tridiagonal.hpp"

namespace hardy {

/// The three integrals of the quotient.
struct QuotientComponents {
  double grad_term = 0.0;      // int |u'|^p delta^{alpha p}
  double mass_alpha = 0.0;     // int |u|^p delta^{alpha p}
  double mass_singular = 0.0;  // int |u|^p delta^{(alpha - 1) p}
};

/// (grad_term - lambda mass_alpha) / mass_singular; EmptyFunction when the
/// singular mass vanishes.
double chi(const ProblemParams& params, const QuotientComponents& c);

/// Nodal weak forms tested against every hat function phi_j:
///   stiffness_j     = int delta^{alpha p} |u'|^{p-2} u' phi_j'
///   mass_alpha_j    = int delta^{alpha p} |u|^{p-2} u phi_j
///   mass_singular_j = int delta^{(alpha-1) p} |u|^{p-2} u phi_j
/// Entries at constrained nodes are zero.
struct WeakForms {
  std::vector<double> stiffness;
  std::vector<double> mass_alpha;
  std::vector<double> mass_singular;
};

/// Quadratic case restricted to the free nodes (a contiguous index range
/// starting at first_free): chi(u) = (u^T A u - lambda u^T M u) / u^T S u.
struct P2Matrices {
  SymTridiagonal A;
  SymTridiagonal M;
  SymTridiagonal S;
  std::size_t first_free = 0;
};

/// Integrals pairing the trial lift psi with itself and with each hat
/// function, for p = 2.  Vectors are indexed by node.
struct EnrichmentIntegrals {
  double grad_psi_psi = 0.0;
  double mass_alpha_psi_psi = 0.0;
  double mass_singular_psi_psi = 0.0;
  std::vector<double> grad_psi_phi;
  std::vector<double> mass_alpha_psi_phi;
  std::vector<double> mass_singular_psi_phi;
};

/// Element-wise integration of the weighted integrals for piecewise-linear
/// functions.  On every element the integrand is a product of powers of
/// affine functions (delta, radius, |u|, hat functions); factors that vanish
/// at an element end are absorbed into a Gauss-Jacobi weight, the rest are
/// sampled at 16 nodes.  Sign changes of u are split at the exact zero.
///
/// Values of u at constrained nodes are ignored and treated as zero.
/// Element contributions are reduced in element order, so results do not
/// depend on the thread count.
class Assembler {
 public:
  /// Throws NonIntegrable when alpha <= -1/p, BadMeshSpec when the mesh
  /// does not span the domain or misses the ridge node.
  Assembler(const ProblemParams& params, const Domain& domain,
            std::shared_ptr<const GradedMesh> mesh, int threads = 1);

  const ProblemParams& params() const { return params_; }
  const Domain& domain() const { return domain_; }
  const std::shared_ptr<const GradedMesh>& mesh() const { return mesh_; }
  const std::vector<bool>& constrained() const { return pinned_; }
  std::size_t n_nodes() const { return mesh_->n_nodes(); }
  std::size_t first_free() const { return first_free_; }
  std::size_t n_free() const { return n_free_; }
  int threads() const { return threads_; }
  void set_threads(int threads) { threads_ = threads; }

  /// Same mesh and exponents with another shift.
  Assembler with_lambda(double lambda) const;

  /// EmptyFunction if u vanishes on every free node.
  QuotientComponents components(const std::vector<double>& u) const;

  /// Components restricted to the tube delta < eta (eta may be any positive
  /// value; the cut need not fall on a node).  No emptiness check.
  QuotientComponents components_within(const std::vector<double>& u, double eta) const;

  double chi(const std::vector<double>& u) const;

  /// With regularize set and p < 2, |u'|^{p-2} is replaced by
  /// (u'^2 + 1e-24)^{(p-2)/2}.
  WeakForms weak_forms(const std::vector<double>& u, bool regularize = false) const;

  /// Exact nodal gradient of chi (zero on constrained nodes).  The
  /// regularization above applies when p < 2.
  std::vector<double> chi_gradient(const std::vector<double>& u) const;

  /// Both at once, sharing the assembly work.
  double chi_and_gradient(const std::vector<double>& u, std::vector<double>& grad) const;

  /// Norm of weak_residual_vector in the dual of preconditioner():
  /// sqrt(r^T P^{-1} r).  Mesh-independent, unlike the Euclidean norm,
  /// which is dominated by the huge entries of the smallest elements.
  double weak_residual(const std::vector<double>& u) const;

  /// WrongExponent unless p = 2.
  P2Matrices p2_matrices() const;

  /// WrongExponent unless p = 2.
  EnrichmentIntegrals enrichment(const TrialLift& lift) const;

  /// SPD tridiagonal on the free nodes: the delta^{alpha p}-weighted
  /// stiffness plus the diagonal of int phi_i^p delta^{(alpha-1) p}.  Used
  /// to precondition descent; finite for every admissible exponent.
  SymTridiagonal preconditioner() const;

  /// Lumped model of the second variation at u on the free nodes:
  /// (p-1) times the stiffness weighted by |u'|^{p-2} delta^{alpha p} plus
  /// the diagonal |u_i|^{p-2} int phi_i^p delta^{(alpha-1) p}, with both
  /// |.|^{p-2} factors floored at 1e-8 of their maximum argument.  Equals
  /// preconditioner() for p = 2.
  SymTridiagonal hessian_model(const std::vector<double>& u) const;

  /// Free-node weak residual stiffness - lambda mass_alpha - chi mass_singular.
  std::vector<double> weak_residual_vector(const std::vector<double>& u) const;

 private:
  struct Element {
    double x0, x1, h;
    double d0, d1;
    double r0, r1;
    int boundary_end;  // -1 none, 0 left, 1 right
    bool tabulated;    // interior with delta end ratio <= 2: fixed Legendre weights
  };
  static constexpr std::size_t kPoints = 16;

  bool use_table(const Element& E, double u0, double u1) const;
  QuotientComponents element_components(std::size_t e, double u0, double u1) const;
  QuotientComponents span_components(const Element& E, double ta, double tb, double ua,
                                     double ub, double slope) const;
  void element_weak(std::size_t e, double u0, double u1, bool regularize,
                    std::array<double, 6>& out) const;
  void span_weak(const Element& E, double ta, double tb, double ua, double ub,
                 std::array<double, 4>& out) const;
  std::vector<double> pinned_values(const std::vector<double>& u) const;
  double grad_power(double slope) const;

  ProblemParams params_;
  Domain domain_;
  std::shared_ptr<const GradedMesh> mesh_;
  int threads_;
  std::vector<bool> pinned_;
  std::size_t first_free_ = 0;
  std::size_t n_free_ = 0;
  double radial_exponent_ = 0.0;
  double radial_const_ = 1.0;
  std::vector<Element> elements_;
  std::vector<double> wg_;      // int delta^{ap} rho per element
  std::vector<double> kalpha_;  // boundary elements: int phi^p delta^{ap} rho
  std::vector<double> ksing_;   // boundary elements: int phi^p delta^{(a-1)p} rho
  std::vector<std::array<double, kPoints>> walpha_;  // interior weights
  std::vector<std::array<double, kPoints>> wsing_;
  std::array<double, kPoints> phi1_{};  // right hat function at the Legendre nodes
  std::vector<double> lumped_sing_;     // int phi_i^p delta^{(a-1)p} rho per node
  bool integer_p_ = false;
};

/// One-shot conveniences.
QuotientComponents assemble_components(const ProblemParams& params, const Domain& domain,
                                       const DiscreteFunction& u);
std::vector<double> chi_gradient(const ProblemParams& params, const Domain& domain,
                                 const DiscreteFunction& u);
P2Matrices p2_matrices(const ProblemParams& params, const Domain& domain,
                       std::shared_ptr<const GradedMesh> mesh);

/// Product of |f_i|^{e_i} over an interval of the given length, where each
/// f_i is affine with the listed end values and keeps one sign inside the
/// interval (split at zeros first).  Exposed for tests.
struct AffineFactor {
  double left;
  double right;
  double exponent;
};
double integrate_affine_product(double length, const std::vector<AffineFactor>& factors);

}  // namespace hardy
