#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"
#include "wg/sparse.hpp"
#include "wg/wg_space.hpp"

namespace wg {

/// Closed-form solution with gradient, used for boundary data and errors.
struct ExactSolution {
  std::function<cplx(Vec2)> value;
  std::function<std::array<cplx, 2>(Vec2)> gradient;

  bool valid() const { return static_cast<bool>(value); }
};

enum class BCType { robin, dirichlet };

/// -div(d grad u) - kappa^2 u = f, with either the impedance condition
/// d grad u . n - i kappa u = g or u = g on the boundary.
struct ProblemSpec {
  double kappa = 1.0;
  std::function<double(Vec2)> d;
  std::function<cplx(Vec2)> f;
  BCType bc = BCType::robin;
  std::function<cplx(Vec2, Vec2)> robin_g;  // (point, outward unit normal)
  std::function<cplx(Vec2)> dirichlet_g;
  ExactSolution exact;
};

struct AssemblyOptions {
  int tri_degree = 5;
  int edge_degree = 5;
  /// Extra composite-subdivision levels for the quadrature rules. -1 keeps
  /// the automatic policy: one level when kappa*h > 1 (oscillatory data),
  /// none otherwise.
  int subdivision_levels = -1;
};

inline int effective_subdivision(const AssemblyOptions& opt, double kappa,
                                 double h) {
  if (opt.subdivision_levels >= 0) return opt.subdivision_levels;
  return kappa * h > 1.0 ? 1 : 0;
}

struct AssembledSystem {
  SparseMatrixC A;
  Eigen::VectorXcd b;
  BCType bc = BCType::robin;
};

/// Assemble a(u,v) = (d grad_w u, grad_w v) - kappa^2 (u0, v0)
///                   + i kappa <u_b, v_b>_{boundary}   (Robin case)
/// and b(v) = (f, v0) + <g, v_b>_{boundary}            (Robin case).
/// For Dirichlet problems the boundary terms are omitted here and the
/// constraint is imposed afterwards by apply_dirichlet.
///
/// Each local value is computed once and emitted to (i,j) and (j,i)
/// back-to-back, so the compressed matrix is symmetric to the last bit.
inline AssembledSystem assemble(const Mesh& m, const DofMap& dm,
                                const ProblemSpec& p,
                                const AssemblyOptions& opt = {}) {
  if (dm.n_cells != m.n_triangles() || dm.n_edges != m.n_edges())
    throw std::invalid_argument("assemble: DofMap does not match mesh");
  const int k = dm.degree;
  const int pc = dm.cell_dim();
  const int pe = dm.edge_dim();
  const int nloc = pc + 3 * pe;
  const double kappa2 = p.kappa * p.kappa;
  const int levels = effective_subdivision(opt, p.kappa, m.h);

  TriangleRule tri_rule = triangle_quadrature(opt.tri_degree);
  EdgeRule edge_rule = edge_quadrature(opt.edge_degree);
  if (levels > 0) {
    tri_rule = subdivide(tri_rule, levels);
    edge_rule = subdivide(edge_rule, levels);
  }

  SparseBuilder builder(dm.n_total());
  builder.triplets.reserve(static_cast<size_t>(m.n_triangles()) * nloc * nloc);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dm.n_total());

  Eigen::MatrixXd local(nloc, nloc);
  for (int t = 0; t < m.n_triangles(); ++t) {
    Triangle tri = m.triangle_geometry(t);
    ElementWeakGradient wgrad = weak_gradient_matrix(m, t, k);
    const int nrt = wgrad.rt.dim();
    MappedRule cell = map_to(tri_rule, tri);

    // Stiffness: G^T S_d G with S_d the d-weighted RT Gram.
    Eigen::MatrixXd sd = Eigen::MatrixXd::Zero(nrt, nrt);
    for (int q = 0; q < cell.size(); ++q) {
      double w = cell.weights[q] * p.d(cell.points[q]);
      for (int i = 0; i < nrt; ++i) {
        Vec2 vi = wgrad.rt.value(i, cell.points[q]);
        for (int j = i; j < nrt; ++j)
          sd(i, j) += w * dot(vi, wgrad.rt.value(j, cell.points[q]));
      }
    }
    sd = sd.selfadjointView<Eigen::Upper>();
    local.noalias() = wgrad.G.transpose() * sd * wgrad.G;

    // Mass: -kappa^2 (u0, v0) on the interior block.
    LocalFrame frame = wgrad.rt.frame;
    for (int q = 0; q < cell.size(); ++q) {
      double w = cell.weights[q];
      for (int a = 0; a < pc; ++a) {
        double va = cell_basis_value(k, frame, a, cell.points[q]);
        for (int bq = a; bq < pc; ++bq)
          local(a, bq) -= kappa2 * w * va *
                          cell_basis_value(k, frame, bq, cell.points[q]);
      }
    }
    for (int a = 0; a < pc; ++a)
      for (int bq = 0; bq < a; ++bq) local(a, bq) = local(bq, a);

    std::vector<int> dofs = dm.element_dofs(m, t);
    for (int a = 0; a < nloc; ++a) {
      builder.add(dofs[a], dofs[a], local(a, a));
      for (int bq = a + 1; bq < nloc; ++bq) {
        cplx v = local(a, bq);
        builder.add(dofs[a], dofs[bq], v);
        builder.add(dofs[bq], dofs[a], v);
      }
    }

    // Load: (f, v0)_T.
    for (int q = 0; q < cell.size(); ++q) {
      cplx fw = p.f(cell.points[q]) * cell.weights[q];
      for (int a = 0; a < pc; ++a)
        b[dofs[a]] += fw * cell_basis_value(k, frame, a, cell.points[q]);
    }
  }

  if (p.bc == BCType::robin) {
    const cplx ik(0.0, p.kappa);
    for (int e = 0; e < m.n_edges(); ++e) {
      const MeshEdge& edge = m.edges[e];
      if (!edge.boundary()) continue;
      Vec2 va = m.vertices[edge.a], vb = m.vertices[edge.b];
      MappedRule pts = map_to(edge_rule, va, vb);
      // Outward normal of the owning triangle along this edge.
      Triangle tri = m.triangle_geometry(edge.left);
      Vec2 n{0, 0};
      for (int j = 0; j < 3; ++j)
        if (m.tri_edges[edge.left][j] == e) n = tri.outward_normal(j);

      Eigen::MatrixXd ee = Eigen::MatrixXd::Zero(pe, pe);
      std::vector<cplx> load(pe, cplx(0));
      for (int q = 0; q < pts.size(); ++q) {
        double s = edge_rule.points[q];
        cplx gw = p.robin_g(pts.points[q], n) * pts.weights[q];
        for (int a = 0; a < pe; ++a) {
          double ba = edge_basis_value(k, a, s);
          load[a] += gw * ba;
          for (int bq = a; bq < pe; ++bq)
            ee(a, bq) += pts.weights[q] * ba * edge_basis_value(k, bq, s);
        }
      }
      for (int a = 0; a < pe; ++a) {
        int ga = dm.edge_offset(e) + a;
        b[ga] += load[a];
        builder.add(ga, ga, ik * ee(a, a));
        for (int bq = a + 1; bq < pe; ++bq) {
          cplx v = ik * ee(a, bq);
          builder.add(ga, dm.edge_offset(e) + bq, v);
          builder.add(dm.edge_offset(e) + bq, ga, v);
        }
      }
    }
  }

  return {builder.compressed(), std::move(b), p.bc};
}

/// Dirichlet system after symmetric elimination of boundary-edge DOFs.
struct ReducedSystem {
  SparseMatrixC A;
  Eigen::VectorXcd b;
  std::vector<int> free_dofs;      // reduced index -> full index
  Eigen::VectorXcd fixed_values;   // full-length; zero on free DOFs
  int n_full = 0;

  Eigen::VectorXcd expand_solution(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd full = fixed_values;
    for (size_t i = 0; i < free_dofs.size(); ++i) full[free_dofs[i]] = x[i];
    return full;
  }
};

/// Edgewise L2 projection of g onto P_k(e) for one edge, in the canonical
/// {1, s} basis.
inline std::vector<cplx> project_edge_data(
    const std::function<cplx(Vec2)>& g, Vec2 va, Vec2 vb, int k,
    const EdgeRule& rule) {
  int pe = edge_basis_dim(k);
  MappedRule pts = map_to(rule, va, vb);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(pe, pe);
  Eigen::VectorXcd mom = Eigen::VectorXcd::Zero(pe);
  for (int q = 0; q < pts.size(); ++q) {
    double s = rule.points[q];
    cplx gv = g(pts.points[q]);
    for (int a = 0; a < pe; ++a) {
      double ba = edge_basis_value(k, a, s);
      mom[a] += pts.weights[q] * gv * ba;
      for (int bq = a; bq < pe; ++bq)
        gram(a, bq) += pts.weights[q] * ba * edge_basis_value(k, bq, s);
    }
  }
  gram = gram.selfadjointView<Eigen::Upper>();
  Eigen::VectorXcd c = gram.llt().solve(mom);
  return std::vector<cplx>(c.data(), c.data() + pe);
}

/// Fix boundary-edge DOFs to Q_b g and eliminate them symmetrically,
/// moving the known contributions to the right-hand side.
inline ReducedSystem apply_dirichlet(const AssembledSystem& sys, const Mesh& m,
                                     const DofMap& dm,
                                     const std::function<cplx(Vec2)>& g,
                                     const AssemblyOptions& opt = {},
                                     double kappa_for_quadrature = 0.0) {
  if (sys.bc != BCType::dirichlet)
    throw std::invalid_argument(
        "apply_dirichlet: system was assembled with Robin boundary terms");
  if (sys.A.rows() != dm.n_total())
    throw std::invalid_argument("apply_dirichlet: system/DofMap size mismatch");

  EdgeRule edge_rule = edge_quadrature(opt.edge_degree);
  int levels = effective_subdivision(opt, kappa_for_quadrature, m.h);
  if (levels > 0) edge_rule = subdivide(edge_rule, levels);

  const int n = dm.n_total();
  const int pe = dm.edge_dim();
  Eigen::VectorXcd fixed = Eigen::VectorXcd::Zero(n);
  std::vector<char> is_fixed(n, 0);
  for (int e = 0; e < m.n_edges(); ++e) {
    if (!m.edges[e].boundary()) continue;
    std::vector<cplx> qb = project_edge_data(
        g, m.vertices[m.edges[e].a], m.vertices[m.edges[e].b], dm.degree,
        edge_rule);
    for (int a = 0; a < pe; ++a) {
      fixed[dm.edge_offset(e) + a] = qb[a];
      is_fixed[dm.edge_offset(e) + a] = 1;
    }
  }

  ReducedSystem red;
  red.n_full = n;
  red.fixed_values = fixed;
  std::vector<int> new_index(n, -1);
  for (int i = 0; i < n; ++i)
    if (!is_fixed[i]) {
      new_index[i] = static_cast<int>(red.free_dofs.size());
      red.free_dofs.push_back(i);
    }

  const int nf = static_cast<int>(red.free_dofs.size());
  red.b = Eigen::VectorXcd::Zero(nf);
  for (int i = 0; i < nf; ++i) red.b[i] = sys.b[red.free_dofs[i]];

  std::vector<TripletC> trip;
  trip.reserve(sys.A.nonZeros());
  for (int col = 0; col < sys.A.outerSize(); ++col)
    for (SparseMatrixC::InnerIterator it(sys.A, col); it; ++it) {
      int i = static_cast<int>(it.row()), j = col;
      if (is_fixed[i]) continue;
      if (is_fixed[j])
        red.b[new_index[i]] -= it.value() * fixed[j];
      else
        trip.emplace_back(new_index[i], new_index[j], it.value());
    }
  red.A.resize(nf, nf);
  red.A.setFromTriplets(trip.begin(), trip.end());
  red.A.makeCompressed();
  return red;
}

}  // namespace wg
