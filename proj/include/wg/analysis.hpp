#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wg/assembly.hpp"
#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"
#include "wg/wg_space.hpp"

namespace wg {

/// L2 projection Q_h u = {Q_0 u, Q_b u}: elementwise onto P_k(T) and
/// edgewise onto P_k(e). `kappa` only controls the oscillatory-data
/// quadrature policy (one subdivision level when kappa*h > 1).
inline WGFunction project(const Mesh& m, const DofMap& dm,
                          const std::function<cplx(Vec2)>& cell_field,
                          const std::function<cplx(Vec2)>& edge_field,
                          double kappa = 0.0, const AssemblyOptions& opt = {}) {
  const int k = dm.degree;
  const int pc = dm.cell_dim();
  const int levels = effective_subdivision(opt, kappa, m.h);
  TriangleRule tri_rule = triangle_quadrature(opt.tri_degree);
  EdgeRule edge_rule = edge_quadrature(opt.edge_degree);
  if (levels > 0) {
    tri_rule = subdivide(tri_rule, levels);
    edge_rule = subdivide(edge_rule, levels);
  }

  WGFunction out;
  out.coeff = Eigen::VectorXcd::Zero(dm.n_total());

  for (int t = 0; t < m.n_triangles(); ++t) {
    Triangle tri = m.triangle_geometry(t);
    LocalFrame frame = element_frame(tri);
    MappedRule cell = map_to(tri_rule, tri);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(pc, pc);
    Eigen::VectorXcd mom = Eigen::VectorXcd::Zero(pc);
    for (int q = 0; q < cell.size(); ++q) {
      cplx uv = cell_field(cell.points[q]);
      for (int a = 0; a < pc; ++a) {
        double ba = cell_basis_value(k, frame, a, cell.points[q]);
        mom[a] += cell.weights[q] * uv * ba;
        for (int b = a; b < pc; ++b)
          gram(a, b) += cell.weights[q] * ba *
                        cell_basis_value(k, frame, b, cell.points[q]);
      }
    }
    gram = gram.selfadjointView<Eigen::Upper>();
    Eigen::VectorXcd c = gram.llt().solve(mom);
    for (int a = 0; a < pc; ++a) out.coeff[dm.interior_offset(t) + a] = c[a];
  }

  for (int e = 0; e < m.n_edges(); ++e) {
    std::vector<cplx> qb =
        project_edge_data(edge_field, m.vertices[m.edges[e].a],
                          m.vertices[m.edges[e].b], k, edge_rule);
    for (int a = 0; a < dm.edge_dim(); ++a)
      out.coeff[dm.edge_offset(e) + a] = qb[a];
  }
  return out;
}

inline WGFunction project(const Mesh& m, const DofMap& dm,
                          const ExactSolution& u, double kappa = 0.0,
                          const AssemblyOptions& opt = {}) {
  if (!u.valid()) throw std::invalid_argument("project: exact solution unset");
  return project(m, dm, u.value, u.value, kappa, opt);
}

namespace detail {

/// Broken L2 norm^2 of the interior component of a coefficient vector.
/// The elementwise integrals of |p|^2 for p in P_k are done with the
/// scaled-monomial Gram matrix (exactly integrated).
inline double broken_l2_norm2(const Eigen::VectorXcd& v, const DofMap& dm,
                              const Mesh& m) {
  const int k = dm.degree;
  const int pc = dm.cell_dim();
  TriangleRule rule = triangle_quadrature(2 * k > 1 ? 2 * k : 1);
  double total = 0.0;
  Eigen::MatrixXd gram(pc, pc);
  for (int t = 0; t < m.n_triangles(); ++t) {
    Triangle tri = m.triangle_geometry(t);
    LocalFrame frame = element_frame(tri);
    MappedRule cell = map_to(rule, tri);
    gram.setZero();
    for (int qp = 0; qp < cell.size(); ++qp)
      for (int a = 0; a < pc; ++a)
        for (int b = a; b < pc; ++b)
          gram(a, b) += cell.weights[qp] *
                        cell_basis_value(k, frame, a, cell.points[qp]) *
                        cell_basis_value(k, frame, b, cell.points[qp]);
    gram = gram.selfadjointView<Eigen::Upper>().toDenseMatrix();
    for (int a = 0; a < pc; ++a)
      for (int b = 0; b < pc; ++b)
        total += gram(a, b) * (std::conj(v[dm.interior_offset(t) + a]) *
                               v[dm.interior_offset(t) + b])
                                  .real();
  }
  return total;
}

}  // namespace detail

/// Relative broken L2 error ||u_h - Q_h u|| / ||Q_h u|| of the interior
/// components.
inline double rel_l2_error(const WGFunction& uh, const WGFunction& q,
                           const DofMap& dm, const Mesh& m) {
  if (uh.coeff.size() != dm.n_total() || q.coeff.size() != dm.n_total())
    throw std::invalid_argument("rel_l2_error: coefficient size mismatch");
  double num2 = detail::broken_l2_norm2(uh.coeff - q.coeff, dm, m);
  double den2 = detail::broken_l2_norm2(q.coeff, dm, m);
  if (den2 <= 0.0) throw std::runtime_error("rel_l2_error: zero denominator");
  return std::sqrt(num2 / den2);
}

namespace detail {

/// Stabilizer functional s(v,v) = h^{-1} sum_T sum_{e in dT} int_e
/// |v0 - v_b|^2 ds for piecewise-constant WG fields.
inline double stabilizer_norm2(const Eigen::VectorXcd& v, const DofMap& dm,
                               const Mesh& m, bool per_element_h) {
  double total = 0.0;
  for (int t = 0; t < m.n_triangles(); ++t) {
    Triangle tri = m.triangle_geometry(t);
    double local = 0.0;
    for (int j = 0; j < 3; ++j) {
      int e = m.tri_edges[t][j];
      cplx jump = v[dm.interior_offset(t)] - v[dm.edge_offset(e)];
      local += tri.edge_length(j) * std::norm(jump);
    }
    total += local / (per_element_h ? tri.diameter() : m.h);
  }
  return total;
}

/// ||grad_w v||^2 via the elementwise RT Gram.
inline double weak_gradient_norm2(const Eigen::VectorXcd& v, const DofMap& dm,
                                  const Mesh& m) {
  double total = 0.0;
  for (int t = 0; t < m.n_triangles(); ++t) {
    ElementWeakGradient wg = weak_gradient_matrix(m, t, dm.degree);
    std::vector<int> dofs = dm.element_dofs(m, t);
    Eigen::VectorXcd local(dofs.size());
    for (size_t a = 0; a < dofs.size(); ++a) local[a] = v[dofs[a]];
    Eigen::VectorXcd g = wg.G * local;
    total += (g.adjoint() * wg.gram * g)(0).real();
  }
  return total;
}

}  // namespace detail

/// Broken L2 error of the interior component scaled by the discrete energy
/// norm ||grad_w Q_h u||, so that both columns of a convergence table share
/// one denominator. This is the scaling the tabulated L2 columns follow;
/// rel_l2_error keeps the plain L2/L2 ratio.
inline double rel_l2_error_energy(const WGFunction& uh, const WGFunction& q,
                                  const DofMap& dm, const Mesh& m) {
  if (uh.coeff.size() != dm.n_total() || q.coeff.size() != dm.n_total())
    throw std::invalid_argument(
        "rel_l2_error_energy: coefficient size mismatch");
  double num2 = detail::broken_l2_norm2(uh.coeff - q.coeff, dm, m);
  double den2 = detail::weak_gradient_norm2(q.coeff, dm, m);
  if (den2 <= 0.0)
    throw std::runtime_error("rel_l2_error_energy: zero denominator");
  return std::sqrt(num2 / den2);
}

/// Relative discrete H1 error. For k=0 the seminorm is the boundary
/// stabilizer h^{-1} sum_T <u0-u_b, u0-u_b>_{dT} (summed over all element
/// boundaries); for k=1 it is the weak-gradient energy norm. In both cases
/// the denominator applies the same functional to Q_h u.
inline double rel_h1_error(const WGFunction& uh, const WGFunction& q,
                           const DofMap& dm, const Mesh& m,
                           bool per_element_h = false) {
  if (uh.coeff.size() != dm.n_total() || q.coeff.size() != dm.n_total())
    throw std::invalid_argument("rel_h1_error: coefficient size mismatch");
  Eigen::VectorXcd diff = uh.coeff - q.coeff;
  double num2, den2;
  if (dm.degree == 0) {
    num2 = detail::stabilizer_norm2(diff, dm, m, per_element_h);
    den2 = detail::stabilizer_norm2(q.coeff, dm, m, per_element_h);
  } else {
    num2 = detail::weak_gradient_norm2(diff, dm, m);
    den2 = detail::weak_gradient_norm2(q.coeff, dm, m);
  }
  if (den2 <= 0.0) throw std::runtime_error("rel_h1_error: zero denominator");
  return std::sqrt(num2 / den2);
}

/// order_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i), defined from row 2 on.
inline std::vector<double> convergence_order(const std::vector<double>& errors,
                                             const std::vector<double>& hs) {
  if (errors.size() != hs.size() || errors.size() < 2)
    throw std::invalid_argument("convergence_order: need >= 2 matching rows");
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0))
      throw std::invalid_argument("convergence_order: errors must be positive");
    if (i > 0 && !(hs[i] < hs[i - 1]))
      throw std::invalid_argument("convergence_order: hs must strictly decrease");
  }
  std::vector<double> orders;
  for (size_t i = 1; i < errors.size(); ++i)
    orders.push_back(std::log(errors[i - 1] / errors[i]) /
                     std::log(hs[i - 1] / hs[i]));
  return orders;
}

/// Mean of pairwise orders plus the least-squares slope of log e vs log h,
/// optionally dropping leading (pre-asymptotic) rows.
inline std::pair<double, double> average_and_lsq_order(
    std::vector<double> errors, std::vector<double> hs, int skip_leading = 0) {
  if (skip_leading < 0 || errors.size() != hs.size())
    throw std::invalid_argument("average_and_lsq_order: bad input");
  if (errors.size() < static_cast<size_t>(skip_leading) + 3)
    throw std::invalid_argument(
        "average_and_lsq_order: need >= 3 rows after exclusions");
  errors.erase(errors.begin(), errors.begin() + skip_leading);
  hs.erase(hs.begin(), hs.begin() + skip_leading);

  std::vector<double> orders = convergence_order(errors, hs);
  double mean = 0.0;
  for (double o : orders) mean += o;
  mean /= static_cast<double>(orders.size());

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (size_t i = 0; i < hs.size(); ++i) {
    double x = std::log(hs[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-14 * n * sxx)
    throw std::invalid_argument("average_and_lsq_order: degenerate fit");
  return {mean, (n * sxy - sx * sy) / det};
}

struct ConvergenceRow {
  double h = 0;
  double err_h1 = 0;
  double ord_h1 = std::numeric_limits<double>::quiet_NaN();
  double err_l2 = 0;
  double ord_l2 = std::numeric_limits<double>::quiet_NaN();
  int n_dof = 0;
  double solve_seconds = 0;
};

struct ConvergenceReport {
  double kappa = 0;
  int degree = 0;
  std::string domain;
  std::vector<ConvergenceRow> rows;
  // Non-empty when the sequence stopped early (solver failure or unknown-count
  // cap); rows then hold the completed levels only.
  std::string abort_reason;

  void finalize_orders() {
    for (size_t i = 1; i < rows.size(); ++i) {
      double lh = std::log(rows[i - 1].h / rows[i].h);
      rows[i].ord_h1 = std::log(rows[i - 1].err_h1 / rows[i].err_h1) / lh;
      rows[i].ord_l2 = std::log(rows[i - 1].err_l2 / rows[i].err_l2) / lh;
    }
  }

  std::vector<double> hs() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.h);
    return v;
  }
  std::vector<double> h1_errors() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.err_h1);
    return v;
  }
  std::vector<double> l2_errors() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.err_l2);
    return v;
  }

  void write_csv(std::ostream& os) const {
    os << "h,errH1,ordH1,errL2,ordL2,nDof,solveSeconds\n";
    char buf[256];
    for (size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      std::snprintf(buf, sizeof buf, "%.17g,%.6g,", r.h, r.err_h1);
      os << buf;
      if (i > 0) {
        std::snprintf(buf, sizeof buf, "%.6g", r.ord_h1);
        os << buf;
      }
      std::snprintf(buf, sizeof buf, ",%.6g,", r.err_l2);
      os << buf;
      if (i > 0) {
        std::snprintf(buf, sizeof buf, "%.6g", r.ord_l2);
        os << buf;
      }
      std::snprintf(buf, sizeof buf, ",%d,%.6g\n", r.n_dof, r.solve_seconds);
      os << buf;
    }
  }

  void write_csv_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(os);
  }
};

}  // namespace wg
