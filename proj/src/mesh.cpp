#include "hardy/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hardy/error.hpp"

namespace hardy {

GradedMesh GradedMesh::from_nodes(std::vector<double> nodes, double grading_ratio) {
  if (nodes.size() < 2) throw Error(ErrorCode::BadMeshSpec, "mesh needs at least two nodes");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw Error(ErrorCode::BadMeshSpec, "mesh nodes must be strictly increasing");
    }
  }
  GradedMesh mesh;
  mesh.nodes = std::move(nodes);
  mesh.grading_ratio = grading_ratio;
  return mesh;
}

namespace {

// Geometric level boundaries from the boundary point outwards:
// 0, D q^{L-1}, ..., D q, D.
std::vector<double> geometric_offsets(double length, std::size_t levels, double q) {
  std::vector<double> out;
  out.reserve(levels + 1);
  out.push_back(0.0);
  for (std::size_t i = levels; i-- > 0;) {
    out.push_back(i == 0 ? length : length * std::pow(q, static_cast<double>(i)));
  }
  return out;
}

double narrowest(const std::vector<double>& x) {
  double w = INFINITY;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) w = std::min(w, x[i + 1] - x[i]);
  return w;
}

std::vector<double> subdivide(const std::vector<double>& x, const std::vector<std::size_t>& parts) {
  std::vector<double> out;
  out.push_back(x.front());
  for (std::size_t e = 0; e + 1 < x.size(); ++e) {
    const double a = x[e];
    const double b = x[e + 1];
    const std::size_t c = parts[e];
    for (std::size_t j = 1; j <= c; ++j) {
      out.push_back(j == c ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(c));
    }
  }
  return out;
}

// m elements between a boundary point (offset 0) and the ridge (offset
// length), graded toward 0 with no element narrower than floor.
std::vector<double> segment_offsets(double length, std::size_t m, double q, double floor) {
  if (q == 1.0) {
    std::vector<double> out;
    for (std::size_t k = 0; k <= m; ++k) {
      out.push_back(k == m ? length : length * static_cast<double>(k) / static_cast<double>(m));
    }
    return out;
  }
  auto geo = geometric_offsets(length, m, q);
  if (narrowest(geo) >= floor) return geo;

  if (m % 2 == 0) {
    // refine the mesh for m / 2: bisect where the floor allows, then give
    // the remaining elements to the widest ones
    const auto coarse = segment_offsets(length, m / 2, q, floor);
    const std::size_t ne = coarse.size() - 1;
    std::vector<std::size_t> parts(ne, 1);
    std::size_t count = 0;
    for (std::size_t e = 0; e < ne; ++e) {
      if (0.5 * (coarse[e + 1] - coarse[e]) >= floor) parts[e] = 2;
      count += parts[e];
    }
    std::vector<std::size_t> order(ne);
    for (std::size_t e = 0; e < ne; ++e) order[e] = e;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return coarse[i + 1] - coarse[i] > coarse[j + 1] - coarse[j];
    });
    for (std::size_t k = 0; count < m; k = (k + 1) % ne, ++count) parts[order[k]] += 1;
    return subdivide(coarse, parts);
  }

  // odd m deeper than the floor allows: fewer levels, elements spread over
  // them, larger levels first
  const double depth = std::log(floor / length) / std::log(q) + 2.0;
  std::size_t levels = std::min(m, static_cast<std::size_t>(std::max(1.0, depth)));
  while (true) {
    std::vector<std::size_t> parts(levels, m / levels);
    for (std::size_t i = 0; i < m % levels; ++i) parts[levels - 1 - i] += 1;
    auto out = subdivide(geometric_offsets(length, levels, q), parts);
    if (levels == 1 || narrowest(out) >= floor) return out;
    --levels;
  }
}

}  // namespace

GradedMesh build_mesh(const Domain& domain, std::size_t n_elements, double grading_ratio) {
  if (n_elements < 4) {
    throw Error(ErrorCode::BadMeshSpec, "mesh needs at least 4 elements");
  }
  if (!(grading_ratio > 0.1 && grading_ratio <= 1.0)) {
    std::ostringstream msg;
    msg << "grading ratio must lie in (0.1, 1], got " << grading_ratio;
    throw Error(ErrorCode::BadMeshSpec, msg.str());
  }
  const double floor = 1e-12 * domain.length_scale();
  std::vector<double> nodes;

  if (domain.has_free_center()) {
    // ball: one segment from the center r = 0 to the boundary r = R
    const double radius = domain.hi();
    const auto off = segment_offsets(radius, n_elements, grading_ratio, floor);
    for (std::size_t i = off.size(); i-- > 0;) {
      nodes.push_back(i == off.size() - 1 ? 0.0 : radius - off[i]);
    }
  } else {
    const double lo = domain.lo();
    const double hi = domain.hi();
    const double mid = domain.ridge();
    const double half = domain.sup_delta();
    const std::size_t left = n_elements / 2;
    const std::size_t right = n_elements - left;
    const auto off_l = segment_offsets(half, left, grading_ratio, floor);
    const auto off_r = segment_offsets(half, right, grading_ratio, floor);
    for (std::size_t i = 0; i + 1 < off_l.size(); ++i) nodes.push_back(lo + off_l[i]);
    nodes.push_back(mid);
    for (std::size_t i = off_r.size() - 1; i-- > 0;) nodes.push_back(hi - off_r[i]);
  }
  return GradedMesh::from_nodes(std::move(nodes), grading_ratio);
}

std::string mesh_hash(const GradedMesh& mesh) {
  std::uint64_t h = 14695981039346656037ull;
  const auto mix = [&h](double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (double x : mesh.nodes) mix(x);
  mix(mesh.grading_ratio);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double DiscreteFunction::operator()(double r) const {
  const auto& x = mesh->nodes;
  if (!(r >= x.front() && r <= x.back())) {
    throw Error(ErrorCode::OutOfDomain, "discrete function evaluated outside its mesh");
  }
  auto it = std::upper_bound(x.begin(), x.end(), r);
  std::size_t e = (it == x.end()) ? x.size() - 2 : static_cast<std::size_t>(it - x.begin()) - 1;
  const double w = (r - x[e]) / (x[e + 1] - x[e]);
  return (1.0 - w) * values[e] + w * values[e + 1];
}

std::vector<bool> constrained_nodes(const Domain& domain, const GradedMesh& mesh) {
  if (mesh.nodes.front() != domain.lo() || mesh.nodes.back() != domain.hi()) {
    throw Error(ErrorCode::BadMeshSpec, "mesh endpoints must match the domain range");
  }
  std::vector<bool> pinned(mesh.n_nodes());
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    pinned[i] = domain.delta(mesh.nodes[i]) == 0.0;
  }
  return pinned;
}

DiscreteFunction interpolate(const Domain& domain, std::shared_ptr<const GradedMesh> mesh,
                             const std::function<double(double)>& f) {
  const auto pinned = constrained_nodes(domain, *mesh);
  DiscreteFunction u{mesh, std::vector<double>(mesh->n_nodes(), 0.0)};
  for (std::size_t i = 0; i < mesh->n_nodes(); ++i) {
    if (!pinned[i]) u.values[i] = f(mesh->nodes[i]);
  }
  return u;
}

}  // namespace hardy
