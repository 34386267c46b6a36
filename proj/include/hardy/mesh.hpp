#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hardy/geometry.hpp"

namespace hardy {

/// Strictly increasing nodes spanning the coordinate range of a domain.
struct GradedMesh {
  std::vector<double> nodes;
  double grading_ratio = 1.0;

  std::size_t n_elements() const { return nodes.size() - 1; }
  std::size_t n_nodes() const { return nodes.size(); }

  /// Explicit node list; throws BadMeshSpec unless strictly increasing with
  /// at least one element.
  static GradedMesh from_nodes(std::vector<double> nodes, double grading_ratio = 1.0);
};

/// Geometric grading toward every boundary point of the domain.
///
/// Each boundary-to-ridge segment of length D with m elements uses the
/// classical geometric nodes {0} U {D q^i : i < m}, whose element widths
/// shrink by the ratio q toward the boundary.  When the narrowest element
/// would fall under 1e-12 times the domain length scale, an even m instead
/// refines the mesh for m / 2: elements are bisected where the floor
/// allows and the remaining ones go to the widest elements.  Doubling m
/// therefore always yields a superset of the previous nodes.
///
/// Requires n_elements >= 4 and grading_ratio in (0.1, 1]; a ratio of 1
/// gives uniform nodes.  Throws BadMeshSpec.
GradedMesh build_mesh(const Domain& domain, std::size_t n_elements, double grading_ratio);

/// Hex FNV-1a digest of the node bit patterns; used in run manifests.
std::string mesh_hash(const GradedMesh& mesh);

/// Nodal values of a continuous piecewise-linear function.
struct DiscreteFunction {
  std::shared_ptr<const GradedMesh> mesh;
  std::vector<double> values;

  /// Value at coordinate r by linear interpolation.
  double operator()(double r) const;
};

/// True for nodes with delta = 0, where values are pinned to zero.
std::vector<bool> constrained_nodes(const Domain& domain, const GradedMesh& mesh);

/// Nodal interpolant of f with the boundary values forced to zero.
DiscreteFunction interpolate(const Domain& domain, std::shared_ptr<const GradedMesh> mesh,
                             const std::function<double(double)>& f);

}  // namespace hardy
