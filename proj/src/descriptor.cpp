#include "lb/descriptor.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace lb {

namespace {

using nlohmann::json;

const double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& msg) { throw ParseError("descriptor: " + msg); }

double parse_bound(const json& j, bool is_lower) {
  if (j.is_null()) return is_lower ? -kInf : kInf;
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    fail("unrecognized bound string \"" + s + "\"");
  }
  fail("bounds must be numbers, null, or \"inf\"/\"-inf\"");
}

Vector parse_bounds(const json& j, int dim, bool is_lower, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(std::string(key) + " must be an array of length dim");
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = parse_bound(j[i], is_lower);
  return v;
}

Vector parse_vector(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) fail(std::string(what) + " must be a non-empty array");
  Vector v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (!j[i].is_number()) fail(std::string(what) + " must contain numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

int require_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    fail(std::string("\"") + key + "\" must be an integer");
  return j[key].get<int>();
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) fail(std::string("\"") + key + "\" must be a string");
  return j[key].get<std::string>();
}

BoxDomain intersect(const BoxDomain& a, const BoxDomain& b) {
  Vector lo = a.lower.cwiseMax(b.lower);
  Vector hi = a.upper.cwiseMin(b.upper);
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) fail("domain restriction leaves an empty box");
  BoxDomain d;
  d.lower = lo;
  d.upper = hi;
  return d;
}

ConvexPotential load_potential_object(const json& j, BoxDomain* out_sample_box) {
  const std::string name = require_string(j, "name");
  const int dim = require_int(j, "dim");
  if (dim < 1 || dim > 16) fail("dim must be between 1 and 16");
  const std::string kind = require_string(j, "kind");

  BoxDomain requested = BoxDomain::unbounded(dim);
  if (j.contains("lower")) requested.lower = parse_bounds(j["lower"], dim, true, "lower");
  if (j.contains("upper")) requested.upper = parse_bounds(j["upper"], dim, false, "upper");
  for (int i = 0; i < dim; ++i)
    if (!(requested.lower[i] < requested.upper[i])) fail("lower bound must stay below upper bound");

  ConvexPotential p;
  if (kind == "builtin") {
    const std::string which = require_string(j, "builtin");
    if (which == "bernoulli") {
      p = potentials::bernoulli();
    } else if (which == "categorical") {
      p = potentials::categorical(dim);
    } else if (which == "poisson") {
      p = potentials::poisson();
    } else if (which == "gaussian_natural") {
      p = potentials::gaussian_natural();
    } else if (which == "quadratic") {
      p = potentials::quadratic(dim);
    } else {
      fail("unknown builtin \"" + which + "\"");
    }
    if (p.dim() != dim) fail("builtin \"" + which + "\" does not have dimension " + std::to_string(dim));
    // A descriptor may restrict the natural domain but never widen it.
    p.domain = intersect(p.domain, requested);
    p.name = name;
  } else if (kind == "polynomial") {
    if (!j.contains("poly_terms") || !j["poly_terms"].is_array() || j["poly_terms"].empty())
      fail("polynomial descriptors need a non-empty \"poly_terms\" array");
    std::vector<PolyTerm> terms;
    for (const auto& tj : j["poly_terms"]) {
      PolyTerm term;
      if (!tj.contains("coeff") || !tj["coeff"].is_number()) fail("poly term needs a numeric coeff");
      term.coeff = tj["coeff"].get<double>();
      if (!tj.contains("exponents") || !tj["exponents"].is_array() ||
          static_cast<int>(tj["exponents"].size()) != dim)
        fail("poly term exponents must be an array of length dim");
      for (const auto& e : tj["exponents"]) {
        if (!e.is_number_integer() || e.get<int>() < 0)
          fail("poly term exponents must be non-negative integers");
        term.exponents.push_back(e.get<int>());
      }
      terms.push_back(std::move(term));
    }
    p = potentials::polynomial(requested, std::move(terms), name);
  } else {
    fail("unknown potential kind \"" + kind + "\"");
  }

  if (out_sample_box && j.contains("sample_box")) {
    const json& sb = j["sample_box"];
    if (!sb.is_object()) fail("sample_box must be an object with lower/upper");
    BoxDomain box;
    box.lower = parse_bounds(sb.contains("lower") ? sb["lower"] : json(), dim, true, "sample_box.lower");
    box.upper = parse_bounds(sb.contains("upper") ? sb["upper"] : json(), dim, false, "sample_box.upper");
    for (int i = 0; i < dim; ++i)
      if (!(box.lower[i] < box.upper[i])) fail("sample_box must have a non-empty interior");
    *out_sample_box = intersect(p.domain, box);
  }
  return p;
}

FamilyPotential load_family_object(const json& j) {
  const std::string name = require_string(j, "name");
  const int dim = require_int(j, "dim");
  const int order = require_int(j, "order");
  if (order < 0) fail("family order must be non-negative");
  if (!j.contains("coefficients") || !j["coefficients"].is_array())
    fail("family descriptors need a \"coefficients\" array");
  if (static_cast<int>(j["coefficients"].size()) != order + 1)
    fail("family needs exactly order + 1 coefficient potentials");

  std::vector<ConvexPotential> coeffs;
  for (const auto& cj : j["coefficients"]) {
    ConvexPotential c = load_potential_object(cj, nullptr);
    if (c.dim() != dim) fail("family coefficient dimension does not match the family");
    coeffs.push_back(std::move(c));
  }
  // Coefficients share one domain; insist the boxes agree so evaluation is
  // well defined for every term.
  auto bounds_equal = [](const Vector& a, const Vector& b) {
    for (int i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return false;
    return true;
  };
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    if (!bounds_equal(coeffs[k].domain.lower, coeffs[0].domain.lower) ||
        !bounds_equal(coeffs[k].domain.upper, coeffs[0].domain.upper))
      fail("family coefficients must share one domain box");

  BoxDomain box = coeffs[0].domain;
  return make_family(std::move(box), std::move(coeffs), name);
}

FiniteExpFamily load_exp_family_object(const json& j) {
  const std::string name = require_string(j, "name");
  if (!j.contains("outcomes") || !j["outcomes"].is_array() || j["outcomes"].empty())
    fail("exponential-family descriptors need a non-empty \"outcomes\" array");
  std::vector<std::string> outcomes;
  for (const auto& oj : j["outcomes"]) {
    if (!oj.is_string()) fail("outcomes must be strings");
    outcomes.push_back(oj.get<std::string>());
  }
  if (!j.contains("weights")) fail("exponential-family descriptors need \"weights\"");
  Vector weights = parse_vector(j["weights"], "weights");
  if (!j.contains("statistic") || !j["statistic"].is_array())
    fail("exponential-family descriptors need a \"statistic\" array");
  std::vector<Vector> stat;
  for (const auto& sj : j["statistic"]) stat.push_back(parse_vector(sj, "statistic row"));
  try {
    return FiniteExpFamily(name, std::move(outcomes), std::move(weights), std::move(stat));
  } catch (const Error& e) {
    fail(e.what());
  }
}

}  // namespace

LoadedDescriptor load_descriptor(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("descriptor is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("descriptor must be a JSON object");

  try {
    LoadedDescriptor d;
    if (j.contains("free_energy")) {
      d.kind = DescriptorKind::qft;
      d.name = require_string(j, "name");
      if (!j.contains("domain") || !j["domain"].is_object())
        fail("field-theory descriptors need a \"domain\" object");
      d.family = load_family_object(j["free_energy"]);
      const int dim = d.family->dim();
      BoxDomain box = BoxDomain::unbounded(dim);
      const json& dj = j["domain"];
      if (dj.contains("lower")) box.lower = parse_bounds(dj["lower"], dim, true, "domain.lower");
      if (dj.contains("upper")) box.upper = parse_bounds(dj["upper"], dim, false, "domain.upper");
      d.coupling_space = box;
      if (!j.contains("validation_grid") || !j["validation_grid"].is_array() ||
          j["validation_grid"].empty())
        fail("field-theory descriptors need a non-empty \"validation_grid\"");
      for (const auto& gj : j["validation_grid"]) {
        Vector t = parse_vector(gj, "grid point");
        if (t.size() != dim) fail("grid point length does not match the domain");
        d.validation_grid.push_back(std::move(t));
      }
    } else if (j.contains("coefficients")) {
      d.kind = DescriptorKind::family;
      d.family = load_family_object(j);
      d.name = d.family->name;
    } else if (j.contains("outcomes")) {
      d.kind = DescriptorKind::exp_family;
      d.exp_family = load_exp_family_object(j);
      d.name = d.exp_family->name();
      d.potential = as_potential(*d.exp_family);
    } else {
      d.kind = DescriptorKind::potential;
      BoxDomain sample_box = BoxDomain::unbounded(1);
      bool have_box = j.contains("sample_box");
      d.potential = load_potential_object(j, have_box ? &sample_box : nullptr);
      d.name = d.potential->name;
      if (have_box) d.sample_box = sample_box;
    }
    return d;
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(std::string("descriptor structure error: ") + e.what());
  }
}

}  // namespace lb
