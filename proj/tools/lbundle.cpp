// Command-line front end: reads a JSON descriptor, runs one of the library
// operations, prints deterministic JSON (or CSV) on stdout. Diagnostics go
// to stderr; the exit code encodes the failure class.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lb/bundle.hpp"
#include "lb/descriptor.hpp"
#include "lb/legendre.hpp"
#include "lb/verify.hpp"

namespace {

using lb::Matrix;
using lb::Vector;

std::string jvec(const Vector& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += lb::format_double(v[i]);
  }
  return s + "]";
}

std::string jmat(const Matrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) s += ',';
    s += "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) s += ',';
      s += lb::format_double(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw lb::ParseError("cannot open input file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Vector parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw lb::ParseError("cannot parse coordinate \"" + item + "\"");
    }
  }
  if (vals.empty()) throw lb::ParseError("empty point");
  Vector v(static_cast<int>(vals.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = vals[static_cast<std::size_t>(i)];
  return v;
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("LB_SEED");
  if (!s || !*s) return 42;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0') return 42;
  return static_cast<std::uint64_t>(v);
}

const lb::ConvexPotential& potential_input(const lb::LoadedDescriptor& d, const char* cmd) {
  if (!d.potential)
    throw lb::ParseError(std::string(cmd) + " expects a potential or exponential-family descriptor");
  return *d.potential;
}

int cmd_transform(const std::string& input, const std::string& theta_text) {
  lb::LoadedDescriptor d = lb::load_descriptor(read_input(input));
  const lb::ConvexPotential& p = potential_input(d, "transform");
  const Vector theta = parse_point(theta_text);
  lb::DualPair pair = lb::to_dual(p, theta);
  std::cout << "{\"theta\":" << jvec(pair.theta) << ",\"eta\":" << jvec(pair.eta)
            << ",\"psi\":" << lb::format_double(pair.psi)
            << ",\"psi_star\":" << lb::format_double(pair.psi_star)
            << ",\"residual\":" << lb::format_double(pair.residual) << "}\n";
  return 0;
}

int cmd_verify(const std::string& input, const lb::VerifyOptions& opts) {
  lb::LoadedDescriptor d = lb::load_descriptor(read_input(input));
  lb::Report r = lb::verify_descriptor(d, opts);
  std::cout << lb::to_json(r) << "\n";
  return r.exit_status();
}

int cmd_fiber(const std::string& input, const std::string& theta_text) {
  lb::LoadedDescriptor d = lb::load_descriptor(read_input(input));
  const lb::ConvexPotential& p = potential_input(d, "fiber");
  const Vector theta = parse_point(theta_text);
  lb::DuallyFlatManifold m(p);
  lb::LegendreBundleFiber f = lb::build_fiber(m, theta);
  std::cout << "{\"theta\":" << jvec(f.base_point) << ",\"pairing\":" << jmat(f.pairing)
            << ",\"L\":" << jmat(f.legendre_map) << ",\"J\":" << jmat(f.para_complex)
            << ",\"omega\":" << jmat(f.symplectic) << "}\n";
  return 0;
}

int cmd_metric(const std::string& input, const std::string& grid_text, bool csv) {
  lb::LoadedDescriptor d = lb::load_descriptor(read_input(input));
  const lb::ConvexPotential& p = potential_input(d, "metric");
  const int n = p.dim();

  double lo = 0, hi = 0, step = 0;
  {
    std::stringstream ss(grid_text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
      throw lb::ParseError("grid must look like lo:hi:step");
    auto num = [](const std::string& s) {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    };
    try {
      lo = num(a);
      hi = num(b);
      step = num(c);
    } catch (const std::exception&) {
      throw lb::ParseError("grid must contain numbers lo:hi:step");
    }
    if (!(step > 0) || !(hi >= lo)) throw lb::ParseError("grid needs step > 0 and hi >= lo");
  }
  std::vector<double> axis;
  for (double x = lo; x <= hi + 1e-9 * step; x += step) axis.push_back(x);

  // Cartesian product over the axes, last coordinate fastest; points outside
  // the open domain are skipped.
  std::vector<Vector> pts;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Vector t(n);
    for (int i = 0; i < n; ++i) t[i] = axis[idx[static_cast<std::size_t>(i)]];
    if (p.domain.is_interior(t)) pts.push_back(t);
    int axis_i = n - 1;
    while (axis_i >= 0) {
      if (++idx[static_cast<std::size_t>(axis_i)] < axis.size()) break;
      idx[static_cast<std::size_t>(axis_i)] = 0;
      --axis_i;
    }
    if (axis_i < 0) break;
  }

  if (csv) {
    std::string header;
    for (int i = 0; i < n; ++i) header += (i ? "," : "") + ("theta_" + std::to_string(i));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) header += ",g_" + std::to_string(i) + "_" + std::to_string(j);
    std::cout << header << "\n";
    for (const Vector& t : pts) {
      Matrix g = lb::hessian(p, t);
      std::string row;
      for (int i = 0; i < n; ++i) row += (i ? "," : "") + lb::format_double(t[i]);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) row += "," + lb::format_double(g(i, j));
      std::cout << row << "\n";
    }
  } else {
    std::cout << "{\"points\":[";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k) std::cout << ',';
      std::cout << "{\"theta\":" << jvec(pts[k]) << ",\"metric\":" << jmat(lb::hessian(p, pts[k]))
                << "}";
    }
    std::cout << "]}\n";
  }
  return 0;
}

int cmd_family(const std::string& input, const std::string& t_text, int u_order) {
  lb::LoadedDescriptor d = lb::load_descriptor(read_input(input));
  if (!d.family) throw lb::ParseError("family expects a family or field-theory descriptor");
  const Vector t = parse_point(t_text);
  lb::FormalSeries s = lb::family_eval(*d.family, t);
  if (u_order >= 0) s = lb::series_truncate(s, u_order);
  std::string coeffs = "[";
  for (int k = 0; k <= s.order(); ++k) {
    if (k) coeffs += ',';
    coeffs += lb::format_double(s[k]);
  }
  coeffs += "]";
  std::cout << "{\"t\":" << jvec(t) << ",\"coefficients\":" << coeffs << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Legendre bundle toolkit: convex potentials, dual geometry, fiber algebra"};
  app.require_subcommand(1);

  std::string input = "-";
  std::string theta_text, t_text, grid_text = "-1:1:0.5";
  bool csv = false;
  int u_order = -1;

  lb::VerifyOptions vopts;
  vopts.seed = seed_from_env();

  auto* transform = app.add_subcommand("transform", "Map a primal point to its dual pair");
  transform->add_option("--input", input, "descriptor file, - for stdin");
  transform->add_option("--theta", theta_text, "comma-separated primal point")->required();

  auto* verify = app.add_subcommand("verify", "Run the verification suite for a descriptor");
  verify->add_option("--input", input, "descriptor file, - for stdin");
  verify->add_option("--samples", vopts.samples, "sample count for randomized checks");
  verify->add_option("--tol-fy", vopts.tol_fy, "Fenchel-Young residual tolerance");
  verify->add_option("--tol-roundtrip", vopts.tol_roundtrip, "dual round-trip tolerance");
  verify->add_option("--tol-duality", vopts.tol_duality, "metric-duality defect tolerance");
  verify->add_option("--tol-flatness", vopts.tol_flatness, "dual flatness defect tolerance");

  auto* fiber = app.add_subcommand("fiber", "Print the bundle fiber at a base point");
  fiber->add_option("--input", input, "descriptor file, - for stdin");
  fiber->add_option("--theta", theta_text, "comma-separated base point")->required();

  auto* metric = app.add_subcommand("metric", "Tabulate the Hessian metric over a grid");
  metric->add_option("--input", input, "descriptor file, - for stdin");
  metric->add_option("--grid", grid_text, "per-axis grid lo:hi:step");
  metric->add_flag("--csv", csv, "write CSV instead of JSON");

  auto* family = app.add_subcommand("family", "Evaluate a family potential's series at a point");
  family->add_option("--input", input, "descriptor file, - for stdin");
  family->add_option("--t", t_text, "comma-separated base point")->required();
  family->add_option("--u-order", u_order, "truncate the printed series at this order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (transform->parsed()) return cmd_transform(input, theta_text);
    if (verify->parsed()) return cmd_verify(input, vopts);
    if (fiber->parsed()) return cmd_fiber(input, theta_text);
    if (metric->parsed()) return cmd_metric(input, grid_text, csv);
    if (family->parsed()) return cmd_family(input, t_text, u_order);
  } catch (const lb::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lb::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lb::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const lb::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const lb::StencilError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const lb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
