#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wg/mesh.hpp"

namespace wg {

// Plain text mesh format, two count-prefixed sections with zero-based
// indices:
//   <vertex count>
//   x y            (one line per vertex, 17 significant digits)
//   <triangle count>
//   i j k
// Coordinates round-trip bit-exactly through %.17g.

inline void write_mesh(std::ostream& out, const Mesh& m) {
  char buf[96];
  out << m.n_vertices() << "\n";
  for (const Vec2& v : m.vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", v.x, v.y);
    out << buf << "\n";
  }
  out << m.n_triangles() << "\n";
  for (const auto& t : m.triangles)
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

inline Mesh read_mesh(std::istream& in) {
  Mesh m;
  int nv = 0;
  if (!(in >> nv) || nv < 0) throw std::runtime_error("mesh file: bad vertex count");
  m.vertices.resize(nv);
  for (int i = 0; i < nv; ++i)
    if (!(in >> m.vertices[i].x >> m.vertices[i].y))
      throw std::runtime_error("mesh file: truncated vertex section");
  int nt = 0;
  if (!(in >> nt) || nt < 0)
    throw std::runtime_error("mesh file: bad triangle count");
  m.triangles.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto& tri = m.triangles[t];
    if (!(in >> tri[0] >> tri[1] >> tri[2]))
      throw std::runtime_error("mesh file: truncated triangle section");
    for (int j = 0; j < 3; ++j)
      if (tri[j] < 0 || tri[j] >= nv)
        throw std::runtime_error("mesh file: triangle index out of range");
  }
  build_edges(m);
  return m;
}

inline void write_mesh_file(const std::string& path, const Mesh& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_mesh(out, m);
}

inline Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mesh(in);
}

}  // namespace wg
