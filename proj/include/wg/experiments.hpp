#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wg/analysis.hpp"
#include "wg/assembly.hpp"
#include "wg/config.hpp"
#include "wg/mesh.hpp"
#include "wg/problems.hpp"
#include "wg/solver.hpp"

namespace wg {

// The corner study runs on a generic triangulation: the structured polar
// mesh is mirror-symmetric about the x-axis, which cancels the leading
// corner-singularity contribution to the duality (L2) error and overstates
// the observable orders. A fixed deterministic perturbation of the coarse
// 4-ring mesh breaks that symmetry; finer levels refine it in the nested
// fashion, re-projecting circle midpoints so the curved boundary stays
// resolved.
constexpr double slit_perturb_amplitude = 0.25;
constexpr unsigned slit_perturb_seed = 3;

inline Mesh make_mesh(const ExperimentConfig& cfg, int param) {
  if (cfg.domain == "hexagon") return hexagon_mesh(param);
  if (cfg.domain == "disk") return disk_mesh(cfg.radius, param);
  int levels = 0;
  for (int n = param; n > 4; n /= 2) {
    if (n % 2 != 0)
      throw std::invalid_argument(
          "make_mesh: slit-disk mesh parameter must be 4*2^j (level j+1 of "
          "the nested family), got " +
          std::to_string(param));
    ++levels;
  }
  if (param < 4)
    throw std::invalid_argument(
        "make_mesh: slit-disk mesh parameter must be 4*2^j (level j+1 of "
        "the nested family), got " +
        std::to_string(param));
  Mesh m = slit_disk_mesh(4, cfg.sectors, cfg.notch_half_angle);
  perturb_slit_disk(m, cfg.notch_half_angle, slit_perturb_amplitude,
                    slit_perturb_seed);
  build_edges(m);
  for (int j = 0; j < levels; ++j) m = refine_project_circle(m);
  return m;
}

/// Domain -> benchmark problem pairing: hexagon runs the Robin impedance
/// problem, the slit disk the singular-corner Dirichlet problem, the disk
/// the variable-dielectric Dirichlet problem.
inline ProblemSpec make_problem_for(const ExperimentConfig& cfg, double kappa) {
  if (cfg.domain == "hexagon") return convex_problem(kappa);
  if (cfg.domain == "disk")
    return inhomogeneous_problem(
        kappa, {cfg.eps1, cfg.eps2, cfg.prof_a, cfg.prof_b, cfg.radius});
  return pacman_problem(kappa, cfg.xi);
}

inline ProblemSpec make_problem(const ExperimentConfig& cfg) {
  return make_problem_for(cfg, cfg.kappa);
}

inline AssemblyOptions assembly_options(const ExperimentConfig& cfg) {
  AssemblyOptions opt;
  opt.tri_degree = cfg.tri_degree;
  opt.subdivision_levels = cfg.subdivision_levels;
  return opt;
}

/// Assemble + solve one mesh; returns the full-length coefficient vector.
inline std::pair<Eigen::VectorXcd, SolveReport> solve_on_mesh(
    const Mesh& m, const DofMap& dm, const ProblemSpec& p,
    const AssemblyOptions& opt) {
  AssembledSystem sys = assemble(m, dm, p, opt);
  if (p.bc == BCType::robin) return solve(sys.A, sys.b);
  ReducedSystem red = apply_dirichlet(sys, m, dm, p.dirichlet_g, opt, p.kappa);
  auto [x, rep] = solve(red.A, red.b);
  return {red.expand_solution(x), rep};
}

/// One solve-project-measure pass per mesh in the sequence.
inline ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  ProblemSpec p = make_problem(cfg);
  AssemblyOptions opt = assembly_options(cfg);
  ConvergenceReport rep;
  rep.kappa = cfg.kappa;
  rep.degree = cfg.degree;
  rep.domain = cfg.domain;

  for (int param : cfg.mesh_seq) {
    Mesh m = make_mesh(cfg, param);
    DofMap dm = dof_map(m, cfg.degree);
    if (dm.n_total() > cfg.max_dofs) {
      rep.abort_reason = "mesh parameter " + std::to_string(param) + " needs " +
                         std::to_string(dm.n_total()) + " unknowns > max_dofs";
      break;
    }
    ConvergenceRow row;
    row.h = m.h;
    row.n_dof = dm.n_total();
    try {
      auto [x, srep] = solve_on_mesh(m, dm, p, opt);
      row.solve_seconds = srep.seconds;
      WGFunction uh{std::move(x)};
      WGFunction q = project(m, dm, p.exact, cfg.kappa, opt);
      row.err_h1 = rel_h1_error(uh, q, dm, m);
      row.err_l2 = rel_l2_error_energy(uh, q, dm, m);
    } catch (const SolverError& err) {
      rep.abort_reason = err.what();
      break;
    }
    rep.rows.push_back(row);
  }
  rep.finalize_orders();

  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out);
    if (!os) throw std::runtime_error("cannot open " + cfg.out + " for writing");
    rep.write_csv(os);
    if (!rep.abort_reason.empty()) os << "# aborted: " << rep.abort_reason << "\n";
  }
  return rep;
}

struct PollutionRow {
  double k = 0;
  int n = 0;
  double h = 0;
  double err_h1 = 0;
};

struct PollutionReport {
  double kh = 0;
  std::vector<PollutionRow> rows;

  void write_csv(std::ostream& os) const {
    os << "k,N,h,errH1\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.6g\n", r.k, r.n, r.h,
                    r.err_h1);
      os << buf;
    }
  }
};

/// Fixed kh sweep over wave numbers on the hexagon: N = round(k/kh).
inline PollutionReport run_pollution(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.domain != "hexagon")
    throw std::invalid_argument("run_pollution: hexagon domain only");
  PollutionReport rep;
  rep.kh = cfg.kh;
  for (double k : cfg.k_list) {
    int n = static_cast<int>(std::lround(k / cfg.kh));
    if (n < 1) n = 1;
    {
      // Refuse before building anything: dof count is known in closed form.
      long cells = 6L * n * n;
      long edges = 9L * n * n + 3L * n;
      long dofs = cfg.degree == 0 ? cells + edges : 3 * cells + 2 * edges;
      if (dofs > cfg.max_dofs)
        throw std::runtime_error("run_pollution: k=" + std::to_string(k) +
                                 " needs " + std::to_string(dofs) +
                                 " unknowns > max_dofs cap");
    }
    Mesh m = hexagon_mesh(n);
    DofMap dm = dof_map(m, cfg.degree);
    ProblemSpec p = make_problem_for(cfg, k);
    AssemblyOptions opt = assembly_options(cfg);
    auto [x, srep] = solve_on_mesh(m, dm, p, opt);
    WGFunction uh{std::move(x)};
    WGFunction q = project(m, dm, p.exact, k, opt);
    rep.rows.push_back({k, n, m.h, rel_h1_error(uh, q, dm, m)});
  }
  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out);
    if (!os) throw std::runtime_error("cannot open " + cfg.out + " for writing");
    rep.write_csv(os);
  }
  return rep;
}

struct TraceRow {
  double x = 0;
  double u0_re = 0;
  double exact_re = 0;
};

struct TraceReport {
  std::vector<TraceRow> rows;

  void write_csv(std::ostream& os) const {
    os << "x,ReU0,ReUexact\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%.6g,%.6g\n", r.x, r.u0_re,
                    r.exact_re);
      os << buf;
    }
  }
};

/// Interior-solution trace along y=0: one sample per triangle touching the
/// axis from above, at (centroid_x, 0), sorted by x.
inline TraceReport run_trace(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.domain != "hexagon")
    throw std::invalid_argument("run_trace: hexagon domain only");
  Mesh m = make_mesh(cfg, cfg.mesh_seq.front());
  DofMap dm = dof_map(m, cfg.degree);
  if (dm.n_total() > cfg.max_dofs)
    throw std::runtime_error("run_trace: unknown count above max_dofs cap");
  ProblemSpec p = make_problem(cfg);
  AssemblyOptions opt = assembly_options(cfg);
  auto [x, srep] = solve_on_mesh(m, dm, p, opt);
  WGFunction uh{std::move(x)};

  TraceReport rep;
  const double tol = 1e-9 * m.h;
  for (int t = 0; t < m.n_triangles(); ++t) {
    Triangle tri = m.triangle_geometry(t);
    double min_y = std::min({tri.a.y, tri.b.y, tri.c.y});
    Vec2 c = tri.centroid();
    if (std::abs(min_y) > tol || c.y <= 0) continue;
    Vec2 sample{c.x, 0.0};
    rep.rows.push_back({c.x, uh.interior_value(m, dm, t, sample).real(),
                        p.exact.value(sample).real()});
  }
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const TraceRow& a, const TraceRow& b) { return a.x < b.x; });
  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out);
    if (!os) throw std::runtime_error("cannot open " + cfg.out + " for writing");
    rep.write_csv(os);
  }
  return rep;
}

struct FieldRecord {
  Triangle tri;
  std::vector<cplx> interior;  // centroid-local scaled monomial coefficients
};

struct FieldDump {
  int degree = 0;
  std::vector<FieldRecord> records;

  void write(std::ostream& os) const {
    os << records.size() << " " << degree << "\n";
    char buf[64];
    for (const auto& r : records) {
      std::ostringstream line;
      const double coords[6] = {r.tri.a.x, r.tri.a.y, r.tri.b.x,
                                r.tri.b.y, r.tri.c.x, r.tri.c.y};
      for (double v : coords) {
        std::snprintf(buf, sizeof buf, "%.17g ", v);
        line << buf;
      }
      for (const cplx& c : r.interior) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g ", c.real(), c.imag());
        line << buf;
      }
      std::string s = line.str();
      s.back() = '\n';
      os << s;
    }
  }
};

inline FieldDump read_field_dump(std::istream& is) {
  FieldDump dump;
  size_t n = 0;
  if (!(is >> n >> dump.degree))
    throw std::runtime_error("field dump: bad header");
  int pc = cell_basis_dim(dump.degree);
  dump.records.resize(n);
  for (size_t i = 0; i < n; ++i) {
    FieldRecord& r = dump.records[i];
    double c[6];
    for (double& v : c)
      if (!(is >> v)) throw std::runtime_error("field dump: truncated record");
    r.tri = {{c[0], c[1]}, {c[2], c[3]}, {c[4], c[5]}};
    r.interior.resize(pc);
    for (cplx& z : r.interior) {
      double re, im;
      if (!(is >> re >> im))
        throw std::runtime_error("field dump: truncated record");
      z = cplx(re, im);
    }
  }
  return dump;
}

/// Solve once and dump the interior polynomial per triangle, for external
/// visualization.
inline FieldDump run_solve_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Mesh m = make_mesh(cfg, cfg.mesh_seq.front());
  DofMap dm = dof_map(m, cfg.degree);
  if (dm.n_total() > cfg.max_dofs)
    throw std::runtime_error("run_solve: unknown count above max_dofs cap");
  ProblemSpec p = make_problem(cfg);
  auto [x, srep] = solve_on_mesh(m, dm, p, assembly_options(cfg));

  FieldDump dump;
  dump.degree = cfg.degree;
  dump.records.resize(m.n_triangles());
  for (int t = 0; t < m.n_triangles(); ++t) {
    FieldRecord& r = dump.records[t];
    r.tri = m.triangle_geometry(t);
    r.interior.resize(dm.cell_dim());
    for (int a = 0; a < dm.cell_dim(); ++a)
      r.interior[a] = x[dm.interior_offset(t) + a];
  }
  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out);
    if (!os) throw std::runtime_error("cannot open " + cfg.out + " for writing");
    dump.write(os);
  }
  return dump;
}

}  // namespace wg
