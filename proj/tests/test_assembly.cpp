#include <Eigen/Dense>
#include <catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "wg/assembly.hpp"
#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"
#include "wg/solver.hpp"
#include "wg/wg_space.hpp"

using namespace wg;

namespace {

// Independent dense assembly: per-element quadratic forms evaluated through
// ElementWeakGradient::apply instead of the G^T S G product, scattered into
// a dense matrix. Exercises both the local forms and the dof scatter.
Eigen::MatrixXcd dense_oracle(const Mesh& m, const DofMap& dm,
                              const ProblemSpec& p, int tri_deg, int edge_deg) {
  const int n = dm.n_total();
  const int pc = dm.cell_dim();
  const int pe = dm.edge_dim();
  const int nloc = pc + 3 * pe;
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
  TriangleRule tri_rule = triangle_quadrature(tri_deg);
  EdgeRule edge_rule = edge_quadrature(edge_deg);

  for (int t = 0; t < m.n_triangles(); ++t) {
    Triangle tri = m.triangle_geometry(t);
    ElementWeakGradient wgrad = weak_gradient_matrix(m, t, dm.degree);
    MappedRule cell = map_to(tri_rule, tri);
    LocalFrame frame = wgrad.rt.frame;
    std::vector<int> dofs = dm.element_dofs(m, t);

    for (int a = 0; a < nloc; ++a) {
      Eigen::VectorXd ea = Eigen::VectorXd::Unit(nloc, a);
      for (int b = 0; b < nloc; ++b) {
        Eigen::VectorXd eb = Eigen::VectorXd::Unit(nloc, b);
        double acc = 0.0;
        for (int q = 0; q < cell.size(); ++q) {
          auto ga = wgrad.apply(ea, cell.points[q]);
          auto gb = wgrad.apply(eb, cell.points[q]);
          acc += cell.weights[q] * p.d(cell.points[q]) *
                 (ga[0] * gb[0] + ga[1] * gb[1]);
          if (a < pc && b < pc)
            acc -= p.kappa * p.kappa * cell.weights[q] *
                   cell_basis_value(dm.degree, frame, a, cell.points[q]) *
                   cell_basis_value(dm.degree, frame, b, cell.points[q]);
        }
        dense(dofs[a], dofs[b]) += acc;
      }
    }
  }

  if (p.bc == BCType::robin) {
    for (int e = 0; e < m.n_edges(); ++e) {
      if (!m.edges[e].boundary()) continue;
      MappedRule pts =
          map_to(edge_rule, m.vertices[m.edges[e].a], m.vertices[m.edges[e].b]);
      for (int a = 0; a < pe; ++a)
        for (int b = 0; b < pe; ++b) {
          double acc = 0.0;
          for (int q = 0; q < pts.size(); ++q)
            acc += pts.weights[q] *
                   edge_basis_value(dm.degree, a, edge_rule.points[q]) *
                   edge_basis_value(dm.degree, b, edge_rule.points[q]);
          dense(dm.edge_offset(e) + a, dm.edge_offset(e) + b) +=
              cplx(0.0, p.kappa) * acc;
        }
    }
  }
  return dense;
}

ProblemSpec plain_spec(double kappa, BCType bc) {
  ProblemSpec p;
  p.kappa = kappa;
  p.bc = bc;
  p.d = [](Vec2) { return 1.0; };
  p.f = [](Vec2) { return cplx(0.0); };
  p.robin_g = [](Vec2, Vec2) { return cplx(0.0); };
  p.dirichlet_g = [](Vec2) { return cplx(0.0); };
  return p;
}

std::vector<int> boundary_edge_dofs(const Mesh& m, const DofMap& dm) {
  std::vector<int> out;
  for (int e = 0; e < m.n_edges(); ++e)
    if (m.edges[e].boundary())
      for (int a = 0; a < dm.edge_dim(); ++a) out.push_back(dm.edge_offset(e) + a);
  return out;
}

// Coefficient vector of the constant function c in the scaled monomial /
// canonical edge bases: only the degree-zero coefficient is nonzero.
Eigen::VectorXcd constant_vector(const Mesh& m, const DofMap& dm, cplx c) {
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dm.n_total());
  for (int t = 0; t < m.n_triangles(); ++t) x[dm.interior_offset(t)] = c;
  for (int e = 0; e < m.n_edges(); ++e) x[dm.edge_offset(e)] = c;
  return x;
}

}  // namespace

TEST_CASE("assembled matrix matches a dense scatter oracle", "[assembly]") {
  Mesh m = hexagon_mesh(1);
  ProblemSpec p = plain_spec(1.3, BCType::robin);
  p.d = [](Vec2 x) { return 1.0 + 0.1 * x.x - 0.05 * x.y; };
  for (int k : {0, 1}) {
    DofMap dm = dof_map(m, k);
    AssemblyOptions opt;
    opt.subdivision_levels = 0;
    auto sys = assemble(m, dm, p, opt);
    Eigen::MatrixXcd oracle =
        dense_oracle(m, dm, p, opt.tri_degree, opt.edge_degree);
    double scale = oracle.cwiseAbs().maxCoeff();
    CHECK((Eigen::MatrixXcd(sys.A) - oracle).cwiseAbs().maxCoeff() <
          1e-12 * scale);
  }
}

TEST_CASE("zero data assembles a zero load vector", "[assembly]") {
  Mesh m = hexagon_mesh(2);
  ProblemSpec p = plain_spec(2.0, BCType::robin);
  auto sys = assemble(m, dof_map(m, 1), p);
  CHECK(sys.b.norm() == 0.0);
}

TEST_CASE("matrix is symmetric to the last bit", "[assembly]") {
  Mesh m = hexagon_mesh(2);
  ProblemSpec p = plain_spec(5.0, BCType::robin);
  p.d = [](Vec2 x) { return 1.0 + 0.3 * x.x * x.y; };
  for (int k : {0, 1}) {
    DofMap dm = dof_map(m, k);
    auto sys = assemble(m, dm, p);
    for (int col = 0; col < sys.A.outerSize(); ++col)
      for (SparseMatrixC::InnerIterator it(sys.A, col); it; ++it) {
        cplx mirror = sys.A.coeff(col, static_cast<int>(it.row()));
        REQUIRE(it.value().real() == mirror.real());
        REQUIRE(it.value().imag() == mirror.imag());
      }
  }
}

TEST_CASE("imaginary entries only couple boundary-edge dofs", "[assembly]") {
  Mesh m = hexagon_mesh(2);
  ProblemSpec p = plain_spec(4.0, BCType::robin);
  DofMap dm = dof_map(m, 1);
  auto sys = assemble(m, dm, p);

  // dof -> owning boundary edge, or -1.
  std::vector<int> owner(dm.n_total(), -1);
  for (int e = 0; e < m.n_edges(); ++e)
    if (m.edges[e].boundary())
      for (int a = 0; a < dm.edge_dim(); ++a) owner[dm.edge_offset(e) + a] = e;

  int imag_entries = 0;
  for (int col = 0; col < sys.A.outerSize(); ++col)
    for (SparseMatrixC::InnerIterator it(sys.A, col); it; ++it)
      if (it.value().imag() != 0.0) {
        ++imag_entries;
        int r = static_cast<int>(it.row());
        REQUIRE(owner[r] >= 0);
        REQUIRE(owner[r] == owner[col]);
      }
  CHECK(imag_entries >= m.n_boundary_edges());
}

TEST_CASE("kappa = 0 gives a real PSD matrix with constants in the kernel",
          "[assembly]") {
  Mesh m = hexagon_mesh(2);
  ProblemSpec p = plain_spec(0.0, BCType::robin);
  for (int k : {0, 1}) {
    DofMap dm = dof_map(m, k);
    auto sys = assemble(m, dm, p);
    Eigen::MatrixXcd dense(sys.A);
    CHECK(dense.imag().cwiseAbs().maxCoeff() == 0.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense.real());
    CHECK(eig.eigenvalues().minCoeff() > -1e-12);

    Eigen::VectorXcd c = constant_vector(m, dm, cplx(1.0));
    CHECK((Eigen::MatrixXcd(sys.A) * c).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("polynomial integrands are quadrature-degree invariant",
          "[assembly]") {
  Mesh m = hexagon_mesh(2);
  ProblemSpec p = plain_spec(5.0, BCType::robin);
  DofMap dm = dof_map(m, 1);

  AssemblyOptions lo;
  lo.subdivision_levels = 0;
  AssemblyOptions hi;
  hi.tri_degree = 9;
  hi.edge_degree = 11;
  hi.subdivision_levels = 2;

  auto a_lo = assemble(m, dm, p, lo);
  auto a_hi = assemble(m, dm, p, hi);
  Eigen::MatrixXcd diff = Eigen::MatrixXcd(a_lo.A) - Eigen::MatrixXcd(a_hi.A);
  double scale = Eigen::MatrixXcd(a_lo.A).cwiseAbs().maxCoeff();
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("Im(x^H A x) equals kappa times the boundary trace mass",
          "[assembly]") {
  Mesh m = hexagon_mesh(2);
  const double kappa = 3.7;
  ProblemSpec p = plain_spec(kappa, BCType::robin);
  p.d = [](Vec2 x) { return 1.0 + 0.2 * x.y * x.y; };
  DofMap dm = dof_map(m, 1);
  auto sys = assemble(m, dm, p);

  std::mt19937 gen(77);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  Eigen::VectorXcd x(dm.n_total());
  for (int i = 0; i < x.size(); ++i) x[i] = cplx(un(gen), un(gen));

  cplx quad = x.dot(sys.A * x);  // Eigen dot conjugates the left factor

  EdgeRule rule = edge_quadrature(5);
  double trace = 0.0;
  for (int e = 0; e < m.n_edges(); ++e) {
    if (!m.edges[e].boundary()) continue;
    MappedRule pts =
        map_to(rule, m.vertices[m.edges[e].a], m.vertices[m.edges[e].b]);
    for (int q = 0; q < pts.size(); ++q) {
      cplx v(0.0);
      for (int a = 0; a < dm.edge_dim(); ++a)
        v += x[dm.edge_offset(e) + a] *
             edge_basis_value(dm.degree, a, rule.points[q]);
      trace += pts.weights[q] * std::norm(v);
    }
  }
  CHECK(quad.imag() == Catch::Approx(kappa * trace).epsilon(1e-12));
}

TEST_CASE("project_edge_data recovers polynomial traces", "[assembly]") {
  Vec2 va{0.0, 0.0}, vb{2.0, 0.0};
  EdgeRule rule = edge_quadrature(5);
  auto g = [](Vec2 x) { return cplx(3.0 + 4.0 * x.x, -x.x); };

  auto c1 = project_edge_data(g, va, vb, 1, rule);
  REQUIRE(c1.size() == 2);
  // x = 1 + s on this edge, so g = (7 + 4s, -1 - s).
  CHECK(std::abs(c1[0] - cplx(7.0, -1.0)) < 1e-13);
  CHECK(std::abs(c1[1] - cplx(4.0, -1.0)) < 1e-13);

  auto c0 = project_edge_data(g, va, vb, 0, rule);
  REQUIRE(c0.size() == 1);
  CHECK(std::abs(c0[0] - cplx(7.0, -1.0)) < 1e-13);
}

TEST_CASE("apply_dirichlet rejects Robin systems", "[assembly]") {
  Mesh m = hexagon_mesh(1);
  DofMap dm = dof_map(m, 0);
  auto sys = assemble(m, dm, plain_spec(1.0, BCType::robin));
  CHECK_THROWS_AS(
      apply_dirichlet(sys, m, dm, [](Vec2) { return cplx(0.0); }),
      std::invalid_argument);
}

TEST_CASE("apply_dirichlet with g = 0 is plain row/column deletion",
          "[assembly]") {
  Mesh m = hexagon_mesh(1);
  ProblemSpec p = plain_spec(2.0, BCType::dirichlet);
  p.f = [](Vec2 x) { return cplx(x.x, x.y); };
  DofMap dm = dof_map(m, 1);
  auto sys = assemble(m, dm, p);
  auto red = apply_dirichlet(sys, m, dm, [](Vec2) { return cplx(0.0); });

  CHECK(red.n_full == dm.n_total());
  CHECK(red.fixed_values.norm() == 0.0);

  std::vector<int> fixed = boundary_edge_dofs(m, dm);
  REQUIRE(static_cast<int>(red.free_dofs.size()) ==
          dm.n_total() - static_cast<int>(fixed.size()));
  for (int i : red.free_dofs)
    CHECK(std::find(fixed.begin(), fixed.end(), i) == fixed.end());

  Eigen::MatrixXcd full(sys.A), sub(red.A);
  for (size_t i = 0; i < red.free_dofs.size(); ++i) {
    CHECK(red.b[i] == sys.b[red.free_dofs[i]]);
    for (size_t j = 0; j < red.free_dofs.size(); ++j)
      CHECK(sub(i, j) == full(red.free_dofs[i], red.free_dofs[j]));
  }
}

TEST_CASE("Dirichlet problem reproduces complex constants exactly",
          "[assembly]") {
  Mesh m = hexagon_mesh(2);
  const cplx c(2.5, -1.5);
  const double kappa = 2.0;
  ProblemSpec p = plain_spec(kappa, BCType::dirichlet);
  p.f = [&](Vec2) { return -kappa * kappa * c; };

  for (int k : {0, 1}) {
    DofMap dm = dof_map(m, k);
    auto sys = assemble(m, dm, p);
    auto red = apply_dirichlet(sys, m, dm, [&](Vec2) { return c; });
    auto [x, rep] = solve(red.A, red.b);
    CHECK(rep.relative_residual < 1e-10);
    Eigen::VectorXcd full = red.expand_solution(x);
    Eigen::VectorXcd expect = constant_vector(m, dm, c);
    CHECK((full - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("quadrature subdivision policy", "[assembly]") {
  AssemblyOptions automatic;
  CHECK(effective_subdivision(automatic, 5.0, 0.5) == 1);   // kappa h = 2.5
  CHECK(effective_subdivision(automatic, 1.0, 0.5) == 0);   // kappa h = 0.5
  AssemblyOptions manual;
  manual.subdivision_levels = 3;
  CHECK(effective_subdivision(manual, 100.0, 1.0) == 3);
}

TEST_CASE("assemble validates the dof map", "[assembly]") {
  Mesh m = hexagon_mesh(1);
  Mesh m2 = hexagon_mesh(2);
  DofMap dm = dof_map(m2, 0);
  CHECK_THROWS_AS(assemble(m, dm, plain_spec(1.0, BCType::robin)),
                  std::invalid_argument);
}
