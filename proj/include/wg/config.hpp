#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace wg {

/// One experiment description: what to run, on which domain, with which
/// physical and mesh parameters. Serialized as a [name] section of
/// key = value lines; unknown keys are rejected so typos surface early.
struct ExperimentConfig {
  std::string name = "convergence";  // convergence | pollution | trace | solve
  std::string domain = "hexagon";    // hexagon | disk | slit-disk
  double kappa = 1.0;
  int degree = 0;
  std::vector<int> mesh_seq = {2, 4, 8, 16, 32, 64};
  double xi = 1.0;
  double kh = 0.25;
  std::vector<double> k_list = {5, 10, 20, 40};
  double eps1 = 2.0;
  double eps2 = 80.0;
  double prof_a = 1.0;
  double prof_b = 3.0;
  double radius = 5.0;
  double notch_half_angle = 0.05235987755982988;  // pi/60
  int sectors = 6;
  std::string out;
  int tri_degree = 5;
  int subdivision_levels = -1;  // -1 = automatic (one level when kappa*h>1)
  int max_dofs = 700000;

  void validate() const {
    if (name != "convergence" && name != "pollution" && name != "trace" &&
        name != "solve")
      throw std::invalid_argument("config: unknown experiment '" + name + "'");
    if (domain != "hexagon" && domain != "disk" && domain != "slit-disk")
      throw std::invalid_argument("config: unknown domain '" + domain + "'");
    if (!(kappa > 0)) throw std::invalid_argument("config: kappa must be > 0");
    if (degree != 0 && degree != 1)
      throw std::invalid_argument("config: degree must be 0 or 1");
    if (mesh_seq.empty())
      throw std::invalid_argument("config: empty mesh sequence");
    for (int n : mesh_seq)
      if (n < 1) throw std::invalid_argument("config: mesh parameters must be >= 1");
    if (!(xi > 0)) throw std::invalid_argument("config: xi must be > 0");
    if (name == "pollution") {
      if (!(kh > 0)) throw std::invalid_argument("config: kh must be > 0");
      if (k_list.empty()) throw std::invalid_argument("config: empty k list");
    }
    if (max_dofs < 1) throw std::invalid_argument("config: max_dofs must be >= 1");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << " ";
    if constexpr (std::is_same_v<T, double>)
      os << fmt_double(v[i]);
    else
      os << v[i];
  }
  return os.str();
}

template <typename T>
std::vector<T> split_list(const std::string& s) {
  std::istringstream is(s);
  std::vector<T> out;
  T v;
  while (is >> v) out.push_back(v);
  return out;
}

}  // namespace detail

inline void save_config(std::ostream& os, const ExperimentConfig& c) {
  os << "[" << c.name << "]\n";
  os << "domain = " << c.domain << "\n";
  os << "kappa = " << detail::fmt_double(c.kappa) << "\n";
  os << "degree = " << c.degree << "\n";
  os << "mesh_seq = " << detail::join(c.mesh_seq) << "\n";
  os << "xi = " << detail::fmt_double(c.xi) << "\n";
  os << "kh = " << detail::fmt_double(c.kh) << "\n";
  os << "k_list = " << detail::join(c.k_list) << "\n";
  os << "eps1 = " << detail::fmt_double(c.eps1) << "\n";
  os << "eps2 = " << detail::fmt_double(c.eps2) << "\n";
  os << "prof_a = " << detail::fmt_double(c.prof_a) << "\n";
  os << "prof_b = " << detail::fmt_double(c.prof_b) << "\n";
  os << "radius = " << detail::fmt_double(c.radius) << "\n";
  os << "notch_half_angle = " << detail::fmt_double(c.notch_half_angle) << "\n";
  os << "sectors = " << c.sectors << "\n";
  os << "out = " << c.out << "\n";
  os << "tri_degree = " << c.tri_degree << "\n";
  os << "subdivision_levels = " << c.subdivision_levels << "\n";
  os << "max_dofs = " << c.max_dofs << "\n";
}

/// Load the section named `section`, or the first section when empty.
inline ExperimentConfig load_config(std::istream& is,
                                    const std::string& section = "") {
  ExperimentConfig c;
  std::string line;
  bool in_section = false, seen_section = false;
  while (std::getline(is, line)) {
    std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[' && s.back() == ']') {
      std::string name = detail::trim(s.substr(1, s.size() - 2));
      if (in_section) break;  // next section starts; we are done
      if (section.empty() || name == section) {
        c.name = name;
        in_section = seen_section = true;
      }
      continue;
    }
    if (!in_section) continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: malformed line '" + s + "'");
    std::string key = detail::trim(s.substr(0, eq));
    std::string val = detail::trim(s.substr(eq + 1));
    if (key == "domain") c.domain = val;
    else if (key == "kappa") c.kappa = std::stod(val);
    else if (key == "degree") c.degree = std::stoi(val);
    else if (key == "mesh_seq") c.mesh_seq = detail::split_list<int>(val);
    else if (key == "xi") c.xi = std::stod(val);
    else if (key == "kh") c.kh = std::stod(val);
    else if (key == "k_list") c.k_list = detail::split_list<double>(val);
    else if (key == "eps1") c.eps1 = std::stod(val);
    else if (key == "eps2") c.eps2 = std::stod(val);
    else if (key == "prof_a") c.prof_a = std::stod(val);
    else if (key == "prof_b") c.prof_b = std::stod(val);
    else if (key == "radius") c.radius = std::stod(val);
    else if (key == "notch_half_angle") c.notch_half_angle = std::stod(val);
    else if (key == "sectors") c.sectors = std::stoi(val);
    else if (key == "out") c.out = val;
    else if (key == "tri_degree") c.tri_degree = std::stoi(val);
    else if (key == "subdivision_levels") c.subdivision_levels = std::stoi(val);
    else if (key == "max_dofs") c.max_dofs = std::stoi(val);
    else throw std::runtime_error("config: unknown key '" + key + "'");
  }
  if (!seen_section)
    throw std::runtime_error(section.empty()
                                 ? "config: no section found"
                                 : "config: section '" + section + "' not found");
  return c;
}

inline void save_config_file(const std::string& path,
                             const ExperimentConfig& c) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  save_config(os, c);
}

inline ExperimentConfig load_config_file(const std::string& path,
                                         const std::string& section = "") {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return load_config(is, section);
}

}  // namespace wg
