// wghelm -- weak Galerkin Helmholtz experiment driver.
//
// Subcommands: convergence, pollution, trace, solve. Parameters come from
// an optional config file (--config [section]) overridden by CLI flags.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "wg/config.hpp"
#include "wg/experiments.hpp"

namespace {

struct FlagSet {
  std::string config_path;
  std::string domain, out, mesh_seq, k_list;
  double kappa = -1, xi = -1, kh = -1;
  double eps1 = -1, eps2 = -1, prof_a = -1, prof_b = -1, radius = -1,
         notch = -1;
  int degree = -1, sectors = -1, max_dofs = -1, tri_degree = -1,
      subdivision = -2;
};

void add_common_flags(CLI::App* cmd, FlagSet& f) {
  cmd->add_option("--config", f.config_path, "config file ([section] key = value)");
  cmd->add_option("--domain", f.domain, "hexagon | disk | slit-disk");
  cmd->add_option("--k", f.kappa, "wave number");
  cmd->add_option("--degree", f.degree, "element degree (0 or 1)");
  cmd->add_option("--mesh-seq", f.mesh_seq,
                  "mesh parameters, e.g. \"2 4 8 16 32 64\"");
  cmd->add_option("--xi", f.xi, "singular-corner exponent");
  cmd->add_option("--kh", f.kh, "fixed kh for the pollution sweep");
  cmd->add_option("--k-list", f.k_list, "wave numbers for the pollution sweep");
  cmd->add_option("--out", f.out, "output CSV/dump path");
  cmd->add_option("--max-dofs", f.max_dofs, "unknown-count cap");
  cmd->add_option("--eps1", f.eps1, "inner permittivity");
  cmd->add_option("--eps2", f.eps2, "outer permittivity");
  cmd->add_option("--prof-a", f.prof_a, "dielectric blend start radius");
  cmd->add_option("--prof-b", f.prof_b, "dielectric blend end radius");
  cmd->add_option("--radius", f.radius, "disk radius");
  cmd->add_option("--notch", f.notch, "slit half-angle (radians)");
  cmd->add_option("--sectors", f.sectors, "slit-disk sector count");
  cmd->add_option("--tri-degree", f.tri_degree, "triangle quadrature exactness");
  cmd->add_option("--subdivision", f.subdivision,
                  "quadrature subdivision levels (-1 = automatic)");
}

wg::ExperimentConfig resolve(const FlagSet& f, const std::string& name) {
  wg::ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = wg::load_config_file(f.config_path, name);
  cfg.name = name;
  if (!f.domain.empty()) cfg.domain = f.domain;
  if (f.kappa > 0) cfg.kappa = f.kappa;
  if (f.degree >= 0) cfg.degree = f.degree;
  if (!f.mesh_seq.empty())
    cfg.mesh_seq = wg::detail::split_list<int>(f.mesh_seq);
  if (f.xi > 0) cfg.xi = f.xi;
  if (f.kh > 0) cfg.kh = f.kh;
  if (!f.k_list.empty()) cfg.k_list = wg::detail::split_list<double>(f.k_list);
  if (!f.out.empty()) cfg.out = f.out;
  if (f.max_dofs > 0) cfg.max_dofs = f.max_dofs;
  if (f.eps1 > 0) cfg.eps1 = f.eps1;
  if (f.eps2 > 0) cfg.eps2 = f.eps2;
  if (f.prof_a > 0) cfg.prof_a = f.prof_a;
  if (f.prof_b > 0) cfg.prof_b = f.prof_b;
  if (f.radius > 0) cfg.radius = f.radius;
  if (f.notch > 0) cfg.notch_half_angle = f.notch;
  if (f.sectors > 0) cfg.sectors = f.sectors;
  if (f.tri_degree > 0) cfg.tri_degree = f.tri_degree;
  if (f.subdivision >= -1) cfg.subdivision_levels = f.subdivision;
  cfg.validate();
  return cfg;
}

void print_convergence(const wg::ConvergenceReport& rep) {
  std::printf("%12s %12s %8s %12s %8s %10s\n", "h", "errH1", "ordH1", "errL2",
              "ordL2", "nDof");
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    if (i == 0)
      std::printf("%12.4e %12.4e %8s %12.4e %8s %10d\n", r.h, r.err_h1, "-",
                  r.err_l2, "-", r.n_dof);
    else
      std::printf("%12.4e %12.4e %8.2f %12.4e %8.2f %10d\n", r.h, r.err_h1,
                  r.ord_h1, r.err_l2, r.ord_l2, r.n_dof);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak Galerkin solver for the 2-D Helmholtz equation"};
  app.require_subcommand(1);

  FlagSet f;
  CLI::App* conv = app.add_subcommand("convergence", "mesh-refinement study");
  CLI::App* poll = app.add_subcommand("pollution", "fixed-kh wave-number sweep");
  CLI::App* trace = app.add_subcommand("trace", "solution trace along y=0");
  CLI::App* solve = app.add_subcommand("solve", "single solve + field dump");
  for (CLI::App* cmd : {conv, poll, trace, solve}) add_common_flags(cmd, f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) {
      wg::ConvergenceReport rep = run_convergence(resolve(f, "convergence"));
      print_convergence(rep);
      if (!rep.abort_reason.empty()) {
        std::fprintf(stderr, "error: sequence aborted (partial results kept): %s\n",
                     rep.abort_reason.c_str());
        return 2;
      }
    } else if (poll->parsed()) {
      wg::PollutionReport rep = run_pollution(resolve(f, "pollution"));
      std::printf("%8s %8s %12s %12s\n", "k", "N", "h", "errH1");
      for (const auto& r : rep.rows)
        std::printf("%8g %8d %12.4e %12.4e\n", r.k, r.n, r.h, r.err_h1);
    } else if (trace->parsed()) {
      wg::TraceReport rep = run_trace(resolve(f, "trace"));
      std::printf("trace: %zu samples\n", rep.rows.size());
    } else {
      wg::FieldDump dump = run_solve_experiment(resolve(f, "solve"));
      std::printf("dumped %zu triangles\n", dump.records.size());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
