#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lb/exp_family.hpp"
#include "lb/formal_series.hpp"
#include "lb/hessian_qft.hpp"
#include "lb/potential.hpp"

namespace lb {

enum class DescriptorKind { potential, family, exp_family, qft };

// Result of parsing a JSON descriptor. Which optionals are populated depends
// on the kind:
//   potential  -> potential (plus sample_box when the file provides one)
//   family     -> family
//   exp_family -> exp_family and its as_potential form in potential
//   qft        -> family (the free energy), coupling_space, validation_grid
struct LoadedDescriptor {
  DescriptorKind kind = DescriptorKind::potential;
  std::string name;
  std::optional<ConvexPotential> potential;
  std::optional<BoxDomain> sample_box;
  std::optional<FamilyPotential> family;
  std::optional<FiniteExpFamily> exp_family;
  std::optional<BoxDomain> coupling_space;
  std::vector<Vector> validation_grid;
};

// Parses a descriptor, dispatching on its fields: "free_energy" marks a
// field-theory descriptor, "coefficients" a family, "outcomes" a finite
// exponential family, anything else a plain potential. Malformed input of
// any sort raises ParseError.
LoadedDescriptor load_descriptor(const std::string& json_text);

}  // namespace lb
