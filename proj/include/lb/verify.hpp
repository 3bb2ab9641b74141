#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lb/descriptor.hpp"
#include "lb/report.hpp"

namespace lb {

// Tolerances and sampling controls for the descriptor verification suites.
// Defaults match the documented guarantees of the library.
struct VerifyOptions {
  int samples = 20;
  std::uint64_t seed = 42;
  double tol_fy = 1e-9;         // Fenchel-Young residual
  double tol_roundtrip = 1e-8;  // primal -> dual -> primal
  double tol_duality = 1e-6;    // metric-duality relation
  double tol_flatness = 1e-5;   // dual-chart flatness
};

// Deterministic interior samples, uniform per coordinate in the given window.
std::vector<Vector> sample_box_points(const BoxDomain& window, int count, std::uint64_t seed);

// Window the suites draw samples from when the descriptor does not provide
// one: the domain clipped to [-2, 2] per coordinate and shrunk away from the
// edges. Finite-difference defect measurements need moderate derivative
// magnitudes, which is a property of the sampling window, not the domain.
BoxDomain default_sample_window(const BoxDomain& domain);

Report verify_potential_suite(const ConvexPotential& p, const BoxDomain& window,
                              const VerifyOptions& o);

Report verify_family_suite(const FamilyPotential& f, const std::vector<Vector>& grid,
                           const VerifyOptions& o);

Report verify_qft_suite(const BoxDomain& coupling_space, const FamilyPotential& free_energy,
                        const std::vector<Vector>& grid, const std::string& name,
                        const VerifyOptions& o);

// Dispatches on the descriptor kind. Exponential families are verified
// through their log-partition potential plus family-specific consistency
// checks of the mean map and Fisher metric.
Report verify_descriptor(const LoadedDescriptor& d, const VerifyOptions& o);

}  // namespace lb
