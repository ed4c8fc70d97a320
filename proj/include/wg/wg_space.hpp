#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

#include "wg/geometry.hpp"
#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"

namespace wg {

/// Coordinates local to an element: xi = (x - centroid) / diameter. Keeps
/// local matrices scaled independently of element size and position.
struct LocalFrame {
  Vec2 centroid;
  double scale = 1.0;

  Vec2 local(Vec2 p) const {
    return {(p.x - centroid.x) / scale, (p.y - centroid.y) / scale};
  }
};

inline LocalFrame element_frame(const Triangle& t) {
  return {t.centroid(), t.diameter()};
}

inline int cell_basis_dim(int k) { return k == 0 ? 1 : 3; }
inline int edge_basis_dim(int k) { return k == 0 ? 1 : 2; }
inline int rt_basis_dim(int k) { return (k + 1) * (k + 3); }

/// Scalar monomial basis on a cell: {1} for k=0, {1, xi, eta} for k=1.
inline double cell_basis_value(int k, const LocalFrame& f, int i, Vec2 p) {
  if (i == 0) return 1.0;
  Vec2 q = f.local(p);
  return i == 1 ? q.x : q.y;
}

/// Basis on an edge in the canonical arclength parameter s in [-1,1],
/// oriented from the lower- to the higher-indexed vertex: {1} for k=0,
/// {1, s} for k=1. Both adjacent triangles see the same parametrization.
inline double edge_basis_value(int k, int i, double s) {
  return i == 0 ? 1.0 : s;
}

/// Raviart-Thomas basis RT_k(T) = P_k(T)^2 + \tilde P_k(T) x, expressed in
/// centroid-local scaled coordinates. Dimension (k+1)(k+3): 3 for k=0
/// (constants plus the radial field), 8 for k=1.
struct RTBasis {
  int k = 0;
  LocalFrame frame;

  int dim() const { return rt_basis_dim(k); }

  Vec2 value(int i, Vec2 p) const {
    Vec2 q = frame.local(p);
    if (k == 0) {
      switch (i) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        default: return q;  // the radial field (xi, eta)
      }
    }
    switch (i) {
      case 0: return {1.0, 0.0};
      case 1: return {q.x, 0.0};
      case 2: return {q.y, 0.0};
      case 3: return {0.0, 1.0};
      case 4: return {0.0, q.x};
      case 5: return {0.0, q.y};
      case 6: return {q.x * q.x, q.x * q.y};  // xi * (xi, eta)
      default: return {q.x * q.y, q.y * q.y};  // eta * (xi, eta)
    }
  }

  /// Divergence in physical coordinates (chain rule brings 1/scale).
  double divergence(int i, Vec2 p) const {
    double inv = 1.0 / frame.scale;
    if (k == 0) return i == 2 ? 2.0 * inv : 0.0;
    Vec2 q = frame.local(p);
    switch (i) {
      case 1: return inv;
      case 5: return inv;
      case 6: return 3.0 * q.x * inv;
      case 7: return 3.0 * q.y * inv;
      default: return 0.0;
    }
  }
};

inline RTBasis rt_basis(const Triangle& t, int k) {
  if (k != 0 && k != 1) throw std::invalid_argument("rt_basis: k must be 0 or 1");
  double d = t.diameter();
  if (!(t.signed_area() > 1e-14 * d * d))
    throw std::invalid_argument("rt_basis: degenerate triangle");
  return {k, element_frame(t)};
}

/// Per-element weak gradient: the matrix G mapping local WG coefficients
/// (cell block, then one block per edge) to RT_k coefficients, defined by
/// (grad_w v, tau)_T = -(v0, div tau)_T + <v_b, tau.n>_{dT}. Also keeps
/// the RT Gram matrix for energy norms.
struct ElementWeakGradient {
  RTBasis rt;
  Eigen::MatrixXd G;     // M^{-1} B, dim RT x local dof count
  Eigen::MatrixXd gram;  // M = (theta_i, theta_j)_T
  Eigen::MatrixXd B;     // right-hand-side functionals of the local dofs
  Eigen::MatrixXd lift;      // w_q (tau_i . n) at the boundary nodes
  Eigen::MatrixXd jump_ops;  // local dofs -> (v_b - v0) at the boundary nodes
  Eigen::LLT<Eigen::MatrixXd> gram_llt;

  int local_dofs() const { return static_cast<int>(G.cols()); }

  /// grad_w of the local coefficient vector, evaluated at a point. Uses the
  /// integrated-by-parts form grad_w v = grad v0 + M^{-1} <v_b - v0, tau.n>
  /// (grad v0 lies in RT_k, so projecting it is the identity) and evaluates
  /// the trace jump v_b - v0 pointwise at the boundary quadrature nodes.
  /// This keeps the kernel exact: for constants the jump vanishes node by
  /// node and grad_w is exactly zero instead of Gram-amplified rounding
  /// noise, and for k=0 the lowest moments of linears cancel the same way.
  template <typename Derived>
  std::array<typename Derived::Scalar, 2> apply(
      const Eigen::MatrixBase<Derived>& local, Vec2 p) const {
    using S = typename Derived::Scalar;
    constexpr bool is_complex = !std::is_same_v<S, double>;
    const int nb = static_cast<int>(jump_ops.rows());
    Eigen::VectorXd jre = Eigen::VectorXd::Zero(nb);
    Eigen::VectorXd jim = Eigen::VectorXd::Zero(nb);
    for (int q = 0; q < nb; ++q)
      for (int j = 0; j < local_dofs(); ++j) {
        if constexpr (is_complex) {
          jre[q] += jump_ops(q, j) * local[j].real();
          jim[q] += jump_ops(q, j) * local[j].imag();
        } else {
          jre[q] += jump_ops(q, j) * local[j];
        }
      }
    Eigen::VectorXd cre = gram_llt.solve(lift * jre);
    Eigen::VectorXd cim;
    if constexpr (is_complex) cim = gram_llt.solve(lift * jim);
    std::array<S, 2> out{S(0), S(0)};
    if (rt.k == 1) {  // grad v0; identically zero for k=0
      double inv = 1.0 / rt.frame.scale;
      out[0] = S(local[1] * inv);
      out[1] = S(local[2] * inv);
    }
    for (int i = 0; i < rt.dim(); ++i) {
      Vec2 v = rt.value(i, p);
      if constexpr (is_complex) {
        out[0] += S(cre[i], cim[i]) * v.x;
        out[1] += S(cre[i], cim[i]) * v.y;
      } else {
        out[0] += cre[i] * v.x;
        out[1] += cre[i] * v.y;
      }
    }
    return out;
  }
};

/// Assemble G = M^{-1} B on one triangle. `edge_forward[j]` tells whether
/// side j runs in the canonical (low to high vertex index) direction;
/// only the k=1 edge basis is orientation sensitive.
inline ElementWeakGradient weak_gradient_matrix(
    const Triangle& t, int k, std::array<bool, 3> edge_forward = {true, true, true}) {
  RTBasis rt = rt_basis(t, k);
  const int nrt = rt.dim();
  const int pc = cell_basis_dim(k);
  const int pe = edge_basis_dim(k);
  const int nloc = pc + 3 * pe;
  const LocalFrame frame = rt.frame;

  TriangleRule tri_rule = triangle_quadrature(2 * k + 2 > 5 ? 2 * k + 2 : 5);
  MappedRule cell = map_to(tri_rule, t);
  EdgeRule edge_rule = edge_quadrature(2 * k + 1 > 5 ? 2 * k + 1 : 5);

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nrt, nrt);
  for (int q = 0; q < cell.size(); ++q) {
    for (int i = 0; i < nrt; ++i) {
      Vec2 vi = rt.value(i, cell.points[q]);
      for (int j = i; j < nrt; ++j) {
        Vec2 vj = rt.value(j, cell.points[q]);
        M(i, j) += cell.weights[q] * dot(vi, vj);
      }
    }
  }
  M = M.selfadjointView<Eigen::Upper>();

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nrt, nloc);
  // Cell block: -(v0, div tau)_T.
  for (int q = 0; q < cell.size(); ++q)
    for (int i = 0; i < nrt; ++i) {
      double div = rt.divergence(i, cell.points[q]);
      if (div == 0.0) continue;
      for (int m = 0; m < pc; ++m)
        B(i, m) -= cell.weights[q] * div *
                   cell_basis_value(k, frame, m, cell.points[q]);
    }
  // Edge blocks: <v_b, tau.n>_{dT} with the element's outward normal. The
  // same sweep records the boundary-node data for the pointwise trace-jump
  // form used by apply(): lift holds w_q (tau_i . n), jump_ops evaluates
  // v_b - v0 of a local coefficient vector at each node.
  const int nq = edge_rule.size();
  Eigen::MatrixXd lift = Eigen::MatrixXd::Zero(nrt, 3 * nq);
  Eigen::MatrixXd jump_ops = Eigen::MatrixXd::Zero(3 * nq, nloc);
  for (int j = 0; j < 3; ++j) {
    Vec2 n = t.outward_normal(j);
    MappedRule pts = map_to(edge_rule, t.edge_start(j), t.edge_end(j));
    for (int q = 0; q < pts.size(); ++q) {
      // Canonical parameter: flip if the side runs against the edge.
      double s = edge_forward[j] ? edge_rule.points[q] : -edge_rule.points[q];
      const int row = j * nq + q;
      for (int m = 0; m < pc; ++m)
        jump_ops(row, m) = -cell_basis_value(k, frame, m, pts.points[q]);
      for (int m = 0; m < pe; ++m)
        jump_ops(row, pc + j * pe + m) = edge_basis_value(k, m, s);
      for (int i = 0; i < nrt; ++i) {
        double tn = dot(rt.value(i, pts.points[q]), n);
        lift(i, row) = pts.weights[q] * tn;
        for (int m = 0; m < pe; ++m)
          B(i, pc + j * pe + m) +=
              pts.weights[q] * tn * edge_basis_value(k, m, s);
      }
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "weak_gradient_matrix: singular RT Gram matrix (degenerate element)");
  ElementWeakGradient out{rt, llt.solve(B), M, B, lift, jump_ops, std::move(llt)};
  return out;
}

/// Mesh-aware variant: picks up canonical edge orientations from the mesh.
inline ElementWeakGradient weak_gradient_matrix(const Mesh& m, int t, int k) {
  return weak_gradient_matrix(
      m.triangle_geometry(t), k,
      {m.edge_forward(t, 0), m.edge_forward(t, 1), m.edge_forward(t, 2)});
}

/// Global numbering: all interior blocks first (triangle order), then all
/// edge blocks (edge order).
struct DofMap {
  int degree = 0;
  int n_cells = 0;
  int n_edges = 0;

  int cell_dim() const { return cell_basis_dim(degree); }
  int edge_dim() const { return edge_basis_dim(degree); }
  int interior_offset(int t) const { return t * cell_dim(); }
  int edge_offset(int e) const { return n_cells * cell_dim() + e * edge_dim(); }
  int n_total() const { return n_cells * cell_dim() + n_edges * edge_dim(); }

  /// Global indices of the local dofs of triangle t (cell block, then the
  /// three edge blocks in side order).
  std::vector<int> element_dofs(const Mesh& m, int t) const {
    std::vector<int> dofs;
    dofs.reserve(cell_dim() + 3 * edge_dim());
    for (int i = 0; i < cell_dim(); ++i) dofs.push_back(interior_offset(t) + i);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < edge_dim(); ++i)
        dofs.push_back(edge_offset(m.tri_edges[t][j]) + i);
    return dofs;
  }
};

inline DofMap dof_map(const Mesh& m, int k) {
  if (k != 0 && k != 1) throw std::invalid_argument("dof_map: k must be 0 or 1");
  return {k, m.n_triangles(), m.n_edges()};
}

/// Coefficients of a weak Galerkin function v = {v0, v_b}, interpreted
/// through a DofMap.
struct WGFunction {
  Eigen::VectorXcd coeff;

  /// Interior polynomial of triangle t evaluated at a point.
  cplx interior_value(const Mesh& m, const DofMap& dm, int t, Vec2 p) const {
    LocalFrame f = element_frame(m.triangle_geometry(t));
    cplx v = 0.0;
    for (int i = 0; i < dm.cell_dim(); ++i)
      v += coeff[dm.interior_offset(t) + i] * cell_basis_value(dm.degree, f, i, p);
    return v;
  }
};

}  // namespace wg
