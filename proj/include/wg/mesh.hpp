#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wg/geometry.hpp"

namespace wg {

/// Mesh edge in canonical orientation: a < b. Interior edges have two
/// adjacent triangles (left, right); boundary edges have right == -1.
struct MeshEdge {
  int a = -1;
  int b = -1;
  int left = -1;
  int right = -1;

  bool boundary() const { return right < 0; }
};

/// Conforming triangular mesh. Triangles are stored counter-clockwise;
/// edge j of triangle t connects triangles[t][j] and triangles[t][(j+1)%3].
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<MeshEdge> edges;
  std::vector<std::array<int, 3>> tri_edges;  // edge index per triangle side
  double h = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  Triangle triangle_geometry(int t) const {
    const auto& tri = triangles[t];
    return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
  }

  double edge_length(int e) const {
    return norm(vertices[edges[e].b] - vertices[edges[e].a]);
  }

  /// True if edge j of triangle t is traversed from the lower to the
  /// higher vertex index (the canonical edge direction).
  bool edge_forward(int t, int j) const {
    return triangles[t][j] == edges[tri_edges[t][j]].a;
  }

  int n_boundary_edges() const {
    int n = 0;
    for (const auto& e : edges)
      if (e.boundary()) ++n;
    return n;
  }
};

/// Longest edge over all triangles.
inline double mesh_size(const Mesh& m) {
  double h = 0.0;
  for (int e = 0; e < m.n_edges(); ++e) h = std::max(h, m.edge_length(e));
  return h;
}

/// Rebuild edge list, adjacency and mesh size from vertices + triangles.
inline void build_edges(Mesh& m) {
  m.edges.clear();
  m.tri_edges.assign(m.triangles.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> index;
  for (int t = 0; t < m.n_triangles(); ++t) {
    for (int j = 0; j < 3; ++j) {
      int u = m.triangles[t][j];
      int v = m.triangles[t][(j + 1) % 3];
      std::pair<int, int> key{std::min(u, v), std::max(u, v)};
      auto it = index.find(key);
      if (it == index.end()) {
        int e = m.n_edges();
        m.edges.push_back({key.first, key.second, t, -1});
        index.emplace(key, e);
        m.tri_edges[t][j] = e;
      } else {
        MeshEdge& edge = m.edges[it->second];
        if (edge.right >= 0)
          throw std::runtime_error("non-manifold edge between vertices " +
                                   std::to_string(key.first) + " and " +
                                   std::to_string(key.second));
        edge.right = t;
        m.tri_edges[t][j] = it->second;
      }
    }
  }
  m.h = mesh_size(m);
}

/// Unit regular hexagon centered at the origin (vertices at distance 1),
/// split into 6N^2 congruent equilateral triangles of side h = 1/N.
inline Mesh hexagon_mesh(int N) {
  if (N < 1) throw std::invalid_argument("hexagon_mesh: N must be >= 1");

  // Triangular lattice points (i,j) with |i| <= N, |j| <= N, |i+j| <= N,
  // mapped through the basis u = (1,0), v = (1/2, sqrt(3)/2).
  const double root3_half = std::sqrt(3.0) / 2.0;
  Mesh m;
  std::map<std::pair<int, int>, int> id;
  auto inside = [N](int i, int j) {
    return std::abs(i) <= N && std::abs(j) <= N && std::abs(i + j) <= N;
  };
  for (int j = -N; j <= N; ++j) {
    for (int i = std::max(-N, -N - j); i <= std::min(N, N - j); ++i) {
      id[{i, j}] = m.n_vertices();
      m.vertices.push_back({(i + 0.5 * j) / N, root3_half * j / N});
    }
  }
  for (int j = -N; j < N; ++j) {
    for (int i = -N; i < N; ++i) {
      if (inside(i, j) && inside(i + 1, j) && inside(i, j + 1))
        m.triangles.push_back({id[{i, j}], id[{i + 1, j}], id[{i, j + 1}]});
      if (inside(i + 1, j) && inside(i + 1, j + 1) && inside(i, j + 1))
        m.triangles.push_back(
            {id[{i + 1, j}], id[{i + 1, j + 1}], id[{i, j + 1}]});
    }
  }
  build_edges(m);
  return m;
}

/// Polygonal disk of radius R: `rings` concentric rings around a central
/// fan, ring i carrying 6i vertices (6*rings^2 triangles total). The
/// boundary polygon is inscribed in the circle and later refinements do
/// not re-project onto it.
inline Mesh disk_mesh(double R, int rings) {
  if (R <= 0.0) throw std::invalid_argument("disk_mesh: R must be positive");
  if (rings < 1) throw std::invalid_argument("disk_mesh: rings must be >= 1");

  Mesh m;
  std::vector<std::vector<int>> ring_ids(rings + 1);
  m.vertices.push_back({0.0, 0.0});
  ring_ids[0] = {0};
  for (int i = 1; i <= rings; ++i) {
    double r = R * i / rings;
    for (int q = 0; q < 6 * i; ++q) {
      double theta = 2.0 * std::numbers::pi * q / (6.0 * i);
      ring_ids[i].push_back(m.n_vertices());
      m.vertices.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }
  // Six 60-degree wedges; within a wedge, ring i contributes i+1 nodes
  // (endpoints shared with the neighbouring wedges).
  auto node = [&](int ring, int q) {
    if (ring == 0) return 0;
    return ring_ids[ring][q % (6 * ring)];
  };
  for (int i = 0; i < rings; ++i) {
    for (int w = 0; w < 6; ++w) {
      for (int t = 0; t <= i; ++t) {
        m.triangles.push_back({node(i, w * i + t), node(i + 1, w * (i + 1) + t),
                               node(i + 1, w * (i + 1) + t + 1)});
        if (t < i)
          m.triangles.push_back({node(i, w * i + t),
                                 node(i + 1, w * (i + 1) + t + 1),
                                 node(i, w * i + t + 1)});
      }
    }
  }
  build_edges(m);
  return m;
}

constexpr double default_notch_half_angle = std::numbers::pi / 60.0;

/// Unit disk with the thin wedge |theta - pi| < notch_half_angle removed.
/// Polar structured triangulation over 2*sectors wedges whose angular
/// resolution grows with the ring index; triangle count = 2*rings^2*sectors.
/// The construction is symmetric under y -> -y.
inline Mesh slit_disk_mesh(int rings, int sectors,
                           double notch_half_angle = default_notch_half_angle) {
  if (rings < 1) throw std::invalid_argument("slit_disk_mesh: rings must be >= 1");
  if (sectors < 1)
    throw std::invalid_argument("slit_disk_mesh: sectors must be >= 1");
  if (!(notch_half_angle > 0.0 && notch_half_angle < std::numbers::pi / 2.0))
    throw std::invalid_argument(
        "slit_disk_mesh: notch half-angle must lie in (0, pi/2)");

  const int W = 2 * sectors;  // wedge count over the arc
  const double arc = 2.0 * (std::numbers::pi - notch_half_angle);
  if (arc / W >= std::numbers::pi / 2.0)
    throw std::invalid_argument(
        "slit_disk_mesh: sectors too small to resolve the notch (wedge angle "
        ">= pi/2)");

  const double theta0 = -(std::numbers::pi - notch_half_angle);
  Mesh m;
  std::vector<std::vector<int>> ring_ids(rings + 1);
  m.vertices.push_back({0.0, 0.0});
  ring_ids[0] = {0};
  for (int i = 1; i <= rings; ++i) {
    double r = static_cast<double>(i) / rings;
    int divisions = W * i;  // open arc: divisions+1 nodes, no wrap-around
    for (int q = 0; q <= divisions; ++q) {
      double theta = theta0 + arc * q / divisions;
      ring_ids[i].push_back(m.n_vertices());
      m.vertices.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }
  auto node = [&](int ring, int q) { return ring_ids[ring][ring == 0 ? 0 : q]; };
  for (int i = 0; i < rings; ++i) {
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t <= i; ++t) {
        m.triangles.push_back({node(i, w * i + t), node(i + 1, w * (i + 1) + t),
                               node(i + 1, w * (i + 1) + t + 1)});
        if (t < i)
          m.triangles.push_back({node(i, w * i + t),
                                 node(i + 1, w * (i + 1) + t + 1),
                                 node(i, w * i + t + 1)});
      }
    }
  }
  build_edges(m);
  return m;
}

/// Deterministic node perturbation that turns the structured slit-disk mesh
/// into a generic (asymmetric) triangulation of the same domain. Interior
/// nodes move freely by up to `amplitude` times their shortest incident edge;
/// nodes on the circle slide along the circle, nodes on a slit face slide
/// along the face, and the origin and the two face-circle corners stay put.
/// Identical seeds give bit-identical meshes on any platform.
inline void perturb_slit_disk(Mesh& m, double notch_half_angle,
                              double amplitude, unsigned seed) {
  if (!(amplitude >= 0.0 && amplitude < 0.5))
    throw std::invalid_argument(
        "perturb_slit_disk: amplitude must lie in [0, 0.5)");
  const double th0 = -(std::numbers::pi - notch_half_angle);
  const double th1 = std::numbers::pi - notch_half_angle;

  std::vector<double> local_h(m.n_vertices(),
                              std::numeric_limits<double>::max());
  std::vector<char> on_boundary(m.n_vertices(), 0);
  for (const auto& e : m.edges) {
    double len = norm(m.vertices[e.a] - m.vertices[e.b]);
    local_h[e.a] = std::min(local_h[e.a], len);
    local_h[e.b] = std::min(local_h[e.b], len);
    if (e.boundary()) on_boundary[e.a] = on_boundary[e.b] = 1;
  }

  std::mt19937 rng(seed);
  // Raw-draw scaling keeps the stream independent of any library's
  // distribution implementation.
  auto symmetric_unit = [&rng]() {
    return 2.0 * std::ldexp(static_cast<double>(rng()), -32) - 1.0;
  };
  for (int v = 0; v < m.n_vertices(); ++v) {
    double u1 = symmetric_unit();
    double u2 = symmetric_unit();  // drawn unconditionally: stream stays aligned
    Vec2& p = m.vertices[v];
    double r = norm(p);
    if (r < 1e-12) continue;  // reentrant corner pinned
    double step = amplitude * local_h[v];
    if (!on_boundary[v]) {
      p = p + step * Vec2{u1, u2};
      continue;
    }
    double theta = std::atan2(p.y, p.x);
    bool on_circle = std::abs(r - 1.0) < 1e-9;
    bool on_face = std::abs(theta - th0) < 1e-9 || std::abs(theta - th1) < 1e-9;
    if (on_circle && on_face) continue;  // face-circle corner pinned
    if (on_circle) {
      double t = std::clamp(theta + step * u1, th0, th1);
      p = Vec2{std::cos(t), std::sin(t)};
    } else if (on_face) {
      double rr = std::clamp(r + step * u1, 0.0, 1.0);
      p = Vec2{rr * std::cos(theta), rr * std::sin(theta)};
    }
  }
}

/// Split every triangle into four through its edge midpoints. Boundary
/// midpoints stay on the chord; no re-projection onto any curve.
inline Mesh refine_uniform(const Mesh& m) {
  Mesh fine;
  fine.vertices = m.vertices;
  fine.vertices.reserve(m.n_vertices() + m.n_edges());
  for (const auto& e : m.edges)
    fine.vertices.push_back(0.5 * (m.vertices[e.a] + m.vertices[e.b]));

  fine.triangles.reserve(4 * m.n_triangles());
  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    int mab = m.n_vertices() + m.tri_edges[t][0];
    int mbc = m.n_vertices() + m.tri_edges[t][1];
    int mca = m.n_vertices() + m.tri_edges[t][2];
    fine.triangles.push_back({tri[0], mab, mca});
    fine.triangles.push_back({mab, tri[1], mbc});
    fine.triangles.push_back({mca, mbc, tri[2]});
    fine.triangles.push_back({mab, mbc, mca});
  }
  build_edges(fine);
  return fine;
}

/// Midpoint refinement that additionally pushes the midpoint of every
/// boundary edge whose endpoints both lie on the circle |p| = radius back
/// onto that circle, so the curved boundary is resolved at each level
/// instead of being frozen at the coarse polygon. Straight boundary pieces
/// (slit faces) are unaffected: their midpoints already lie on the face.
inline Mesh refine_project_circle(const Mesh& m, double radius = 1.0) {
  if (!(radius > 0.0))
    throw std::invalid_argument("refine_project_circle: radius must be > 0");
  std::vector<char> on_circle(m.n_vertices(), 0);
  for (int v = 0; v < m.n_vertices(); ++v)
    on_circle[v] = std::abs(norm(m.vertices[v]) - radius) < 1e-9 * radius;

  Mesh fine = refine_uniform(m);
  for (int e = 0; e < m.n_edges(); ++e) {
    const auto& ed = m.edges[e];
    if (ed.boundary() && on_circle[ed.a] && on_circle[ed.b]) {
      Vec2& p = fine.vertices[m.n_vertices() + e];
      p = (radius / norm(p)) * p;
    }
  }
  build_edges(fine);
  return fine;
}

/// Check all mesh invariants; returns human-readable violations (empty on
/// success).
inline std::vector<std::string> validate(const Mesh& m,
                                         double shape_regularity_limit = 10.0) {
  std::vector<std::string> violations;
  auto flag = [&](std::string msg) { violations.push_back(std::move(msg)); };

  const int nv = m.n_vertices();
  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    for (int j = 0; j < 3; ++j)
      if (tri[j] < 0 || tri[j] >= nv)
        flag("triangle " + std::to_string(t) + " references invalid vertex");
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      flag("triangle " + std::to_string(t) + " has repeated vertices");
  }
  if (!violations.empty()) return violations;

  for (int t = 0; t < m.n_triangles(); ++t) {
    Triangle g = m.triangle_geometry(t);
    if (!(g.signed_area() > 0.0))
      flag("triangle " + std::to_string(t) + " is not counter-clockwise");
    else if (g.circumradius() / g.inradius() > shape_regularity_limit)
      flag("triangle " + std::to_string(t) + " violates shape regularity (" +
           std::to_string(g.circumradius() / g.inradius()) + " > " +
           std::to_string(shape_regularity_limit) + ")");
  }

  // Recompute adjacency from the triangles and reconcile with the stored
  // edge list: catches dangling edges, missing edges and wrong flags.
  std::map<std::pair<int, int>, int> incident;
  for (int t = 0; t < m.n_triangles(); ++t)
    for (int j = 0; j < 3; ++j) {
      int u = m.triangles[t][j];
      int v = m.triangles[t][(j + 1) % 3];
      ++incident[{std::min(u, v), std::max(u, v)}];
    }

  std::map<std::pair<int, int>, int> stored;
  for (int e = 0; e < m.n_edges(); ++e) {
    const MeshEdge& edge = m.edges[e];
    if (edge.a >= edge.b)
      flag("edge " + std::to_string(e) + " is not canonically oriented (a < b)");
    ++stored[{std::min(edge.a, edge.b), std::max(edge.a, edge.b)}];
    auto it = incident.find({std::min(edge.a, edge.b), std::max(edge.a, edge.b)});
    int count = it == incident.end() ? 0 : it->second;
    if (count == 0)
      flag("edge " + std::to_string(e) + " dangles (no adjacent triangle)");
    else if (edge.boundary() && count != 1)
      flag("edge " + std::to_string(e) +
           " is flagged boundary but has " + std::to_string(count) +
           " adjacent triangles");
    else if (!edge.boundary() && count != 2)
      flag("edge " + std::to_string(e) +
           " is flagged interior but has " + std::to_string(count) +
           " adjacent triangles");
  }
  for (const auto& [key, count] : incident) {
    if (count > 2)
      flag("non-manifold edge between vertices " + std::to_string(key.first) +
           " and " + std::to_string(key.second));
    if (stored.find(key) == stored.end())
      flag("missing edge between vertices " + std::to_string(key.first) +
           " and " + std::to_string(key.second));
  }

  // Euler relation for a simply connected triangulation.
  if (m.n_vertices() - m.n_edges() + m.n_triangles() != 1)
    flag("Euler relation V - E + F = 1 violated: V=" +
         std::to_string(m.n_vertices()) + " E=" + std::to_string(m.n_edges()) +
         " F=" + std::to_string(m.n_triangles()));

  return violations;
}

}  // namespace wg
