#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lb/descriptor.hpp"
#include "lb/verify.hpp"

using lb::DescriptorKind;
using lb::LoadedDescriptor;
using lb::Vector;

namespace {

std::string descriptor_dir() {
  if (const char* env = std::getenv("LB_DESCRIPTOR_DIR")) return env;
  for (const char* guess : {"descriptors", "../descriptors"})
    if (std::filesystem::is_directory(guess)) return guess;
  return "descriptors";
}

std::string slurp(const std::string& filename) {
  std::ifstream in(descriptor_dir() + "/" + filename);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Vector vec1(double a) { return (Vector(1) << a).finished(); }

}  // namespace

TEST_CASE("builtin potential descriptors load with their natural domain") {
  LoadedDescriptor d = lb::load_descriptor(
      R"({"name": "my_bernoulli", "dim": 1, "kind": "builtin", "builtin": "bernoulli"})");
  CHECK(d.kind == DescriptorKind::potential);
  CHECK(d.name == "my_bernoulli");
  REQUIRE(d.potential.has_value());
  CHECK(d.potential->name == "my_bernoulli");
  CHECK(d.potential->dim() == 1);
  CHECK(std::isinf(d.potential->domain.lower[0]));
  CHECK(std::isinf(d.potential->domain.upper[0]));
  CHECK_FALSE(d.sample_box.has_value());
  CHECK(std::abs(lb::eval(*d.potential, vec1(0.0)) - 0.69314718055994529) <=
        1e-15);
}

TEST_CASE("descriptors may restrict the natural domain but never widen it") {
  LoadedDescriptor d = lb::load_descriptor(
      R"({"name": "g", "dim": 2, "kind": "builtin", "builtin": "gaussian_natural",
          "upper": ["inf", 5.0]})");
  // The natural domain already caps the second coordinate at zero.
  CHECK(d.potential->domain.upper[1] == 0.0);
  CHECK(std::isinf(d.potential->domain.upper[0]));

  LoadedDescriptor r = lb::load_descriptor(
      R"({"name": "b", "dim": 1, "kind": "builtin", "builtin": "bernoulli",
          "lower": [-1.0], "upper": [1.0]})");
  CHECK(r.potential->domain.lower[0] == -1.0);
  CHECK(r.potential->domain.upper[0] == 1.0);

  // A restriction that empties the gaussian's half space is malformed.
  CHECK_THROWS_AS(lb::load_descriptor(
                      R"({"name": "g", "dim": 2, "kind": "builtin",
                          "builtin": "gaussian_natural", "lower": [0.0, 1.0]})"),
                  lb::ParseError);
}

TEST_CASE("sample boxes are loaded and clipped to the domain") {
  LoadedDescriptor d = lb::load_descriptor(
      R"({"name": "b", "dim": 1, "kind": "builtin", "builtin": "bernoulli",
          "upper": [0.5], "sample_box": {"lower": [-1.0], "upper": [2.0]}})");
  REQUIRE(d.sample_box.has_value());
  CHECK(d.sample_box->lower[0] == -1.0);
  CHECK(d.sample_box->upper[0] == 0.5);
}

TEST_CASE("polynomial descriptors build the stated monomials") {
  LoadedDescriptor d = lb::load_descriptor(
      R"({"name": "saddlefree", "dim": 2, "kind": "polynomial",
          "poly_terms": [{"coeff": 1.0, "exponents": [2, 0]},
                         {"coeff": 1.0, "exponents": [0, 2]}]})");
  CHECK(d.kind == DescriptorKind::potential);
  Vector x(2);
  x << 1.0, 1.0;
  CHECK(lb::eval(*d.potential, x) == 2.0);
}

TEST_CASE("family descriptors populate a family potential") {
  LoadedDescriptor d = lb::load_descriptor(slurp("quartic_family.json"));
  CHECK(d.kind == DescriptorKind::family);
  REQUIRE(d.family.has_value());
  CHECK(d.family->order() == 1);
  CHECK(d.family->dim() == 1);
  lb::FormalSeries s = lb::family_eval(*d.family, vec1(1.0));
  CHECK(s[0] == 0.5);
  CHECK(s[1] == 1.0 / 12.0);
}

TEST_CASE("exponential family descriptors carry their log partition potential") {
  LoadedDescriptor d = lb::load_descriptor(slurp("bernoulli_family.json"));
  CHECK(d.kind == DescriptorKind::exp_family);
  REQUIRE(d.exp_family.has_value());
  CHECK(d.exp_family->outcome_count() == 2);
  REQUIRE(d.potential.has_value());
  CHECK(std::abs(lb::eval(*d.potential, vec1(0.0)) - 0.69314718055994529) <=
        1e-15);
}

TEST_CASE("field theory descriptors populate couplings, energy and grid") {
  LoadedDescriptor d = lb::load_descriptor(slurp("quartic_qft.json"));
  CHECK(d.kind == DescriptorKind::qft);
  CHECK(d.name == "quartic_qft");
  REQUIRE(d.family.has_value());
  REQUIRE(d.coupling_space.has_value());
  CHECK(d.coupling_space->lower[0] == -2.0);
  CHECK(d.coupling_space->upper[0] == 2.0);
  CHECK(d.validation_grid.size() == 3);
}

TEST_CASE("malformed descriptors raise parse errors") {
  auto bad = [](const char* text) {
    CHECK_THROWS_AS(lb::load_descriptor(text), lb::ParseError);
  };
  bad("this is not json");
  bad("[1, 2, 3]");
  bad(R"({"dim": 1, "kind": "builtin", "builtin": "bernoulli"})");
  bad(R"({"name": "x", "dim": 0, "kind": "builtin", "builtin": "bernoulli"})");
  bad(R"({"name": "x", "dim": 17, "kind": "builtin", "builtin": "quadratic"})");
  bad(R"({"name": "x", "dim": 1, "kind": "fourier"})");
  bad(R"({"name": "x", "dim": 1, "kind": "builtin", "builtin": "laplace"})");
  bad(R"({"name": "x", "dim": 2, "kind": "builtin", "builtin": "bernoulli"})");
  bad(R"({"name": "x", "dim": 1, "kind": "polynomial", "poly_terms": []})");
  bad(R"({"name": "x", "dim": 1, "kind": "polynomial",
          "poly_terms": [{"coeff": 1.0, "exponents": [2, 0]}]})");
  bad(R"({"name": "x", "dim": 1, "kind": "polynomial",
          "poly_terms": [{"coeff": 1.0, "exponents": [-2]}]})");
  bad(R"({"name": "x", "dim": 1, "kind": "polynomial",
          "poly_terms": [{"exponents": [2]}]})");
  bad(R"({"name": "x", "dim": 1, "kind": "builtin", "builtin": "bernoulli",
          "lower": ["huge"]})");
  bad(R"({"name": "x", "dim": 1, "kind": "builtin", "builtin": "bernoulli",
          "lower": [1.0], "upper": [0.0]})");
  bad(R"({"name": "x", "dim": 1, "kind": "builtin", "builtin": "bernoulli",
          "lower": [0.0, 1.0]})");
  bad(R"({"name": "x", "dim": 1, "kind": "builtin", "builtin": "bernoulli",
          "sample_box": {"lower": [1.0], "upper": [-1.0]}})");
}

TEST_CASE("malformed family and field theory descriptors raise parse errors") {
  auto bad = [](const std::string& text) {
    CHECK_THROWS_AS(lb::load_descriptor(text), lb::ParseError);
  };
  const std::string quad =
      R"({"name": "q", "dim": 1, "kind": "builtin", "builtin": "quadratic"})";
  const std::string quad_boxed =
      R"({"name": "q", "dim": 1, "kind": "builtin", "builtin": "quadratic",
          "upper": [3.0]})";

  bad(R"({"name": "f", "dim": 1, "order": -1, "coefficients": []})");
  bad(R"({"name": "f", "dim": 1, "order": 1, "coefficients": [)" + quad + "]}");
  bad(R"({"name": "f", "dim": 1, "order": 1, "coefficients": [)" + quad + "," + quad_boxed +
      "]}");
  bad(R"({"name": "f", "dim": 2, "order": 0, "coefficients": [)" + quad + "]}");

  bad(R"({"name": "e", "outcomes": ["a", "b"], "weights": [1.0],
          "statistic": [[0.0], [1.0]]})");
  bad(R"({"name": "e", "outcomes": ["a", "b"], "weights": [1.0, 0.0],
          "statistic": [[0.0], [1.0]]})");
  bad(R"({"name": "e", "outcomes": ["a", "b"], "weights": [1.0, 1.0],
          "statistic": [[1.0], [1.0]]})");

  const std::string energy =
      R"("free_energy": {"name": "f", "dim": 1, "order": 0, "coefficients": [)" + quad + "]}";
  bad("{\"name\": \"q\", " + energy + "}");
  bad("{\"name\": \"q\", " + energy + R"(, "domain": {}})");
  bad("{\"name\": \"q\", " + energy + R"(, "domain": {}, "validation_grid": []})");
  bad("{\"name\": \"q\", " + energy + R"(, "domain": {}, "validation_grid": [[0.0, 1.0]]})");
}

TEST_CASE("every bundled descriptor parses to its intended kind") {
  const struct {
    const char* file;
    DescriptorKind kind;
  } expected[] = {
      {"bernoulli.json", DescriptorKind::potential},
      {"categorical2.json", DescriptorKind::potential},
      {"categorical3.json", DescriptorKind::potential},
      {"poisson.json", DescriptorKind::potential},
      {"gaussian_natural.json", DescriptorKind::potential},
      {"polywell.json", DescriptorKind::potential},
      {"bernoulli_family.json", DescriptorKind::exp_family},
      {"quartic_family.json", DescriptorKind::family},
      {"quartic_qft.json", DescriptorKind::qft},
      {"flat_bottom_family.json", DescriptorKind::family},
  };
  for (const auto& e : expected) {
    CAPTURE(e.file);
    LoadedDescriptor d = lb::load_descriptor(slurp(e.file));
    CHECK(d.kind == e.kind);
  }
  LoadedDescriptor p = lb::load_descriptor(slurp("poisson.json"));
  REQUIRE(p.sample_box.has_value());
  CHECK(p.sample_box->lower[0] == -1.0);
  CHECK(p.sample_box->upper[0] == 1.0);
}

TEST_CASE("the verification suite dispatches on descriptor kind") {
  lb::VerifyOptions o;
  o.samples = 5;

  lb::Report good = lb::verify_descriptor(lb::load_descriptor(slurp("bernoulli.json")), o);
  CHECK(good.passed());
  CHECK(good.exit_status() == 0);

  // Same descriptor, same options: the serialized report must be identical.
  lb::Report again = lb::verify_descriptor(lb::load_descriptor(slurp("bernoulli.json")), o);
  CHECK(lb::to_json(good) == lb::to_json(again));

  lb::Report broken =
      lb::verify_descriptor(lb::load_descriptor(slurp("flat_bottom_family.json")), o);
  CHECK_FALSE(broken.passed());
  CHECK(broken.exit_status() == 1);
}
