#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "vsw/audit.hpp"

namespace vsw {

/// Random admissible state: depth in [0.2, 4], |u|, |v| < 3, log-uniform eigenvalues of C_h
/// in [0.25, 4] with a random principal angle, log-uniform c_zz in [0.25, 4].
inline PrimitiveState<double> random_admissible_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto range = [&](double a, double b) { return a + (b - a) * unit(rng); };
  PrimitiveState<double> p;
  p.h = range(0.2, 4.0);
  p.u = range(-3.0, 3.0);
  p.v = range(-3.0, 3.0);
  const double l1 = std::exp(range(std::log(0.25), std::log(4.0)));
  const double l2 = std::exp(range(std::log(0.25), std::log(4.0)));
  const double th = range(0.0, 3.141592653589793);
  const double c = std::cos(th), s = std::sin(th);
  p.cxx = l1 * c * c + l2 * s * s;
  p.cyy = l1 * s * s + l2 * c * c;
  p.cxy = (l1 - l2) * c * s;
  p.czz = std::exp(range(std::log(0.25), std::log(4.0)));
  return p;
}

struct FuzzSummary {
  long pairs = 0;
  double max_audit_residual = 0;
  std::string worst_invariant;
  long failed_conditions = 0;      // pairs whose selection ended fail-soft
  long entropy_violations = 0;     // passing pairs that break the cell-integral entropy bound
  double worst_entropy_excess = 0; // relative
  long admissibility_violations = 0;
  bool ok(double audit_tol = 1e-10) const {
    return max_audit_residual <= audit_tol && entropy_violations == 0 && admissibility_violations == 0;
  }
};

/// Random pairs with random interface normals, solved and audited.
FuzzSummary fuzz_riemann(long pairs, std::uint64_t seed, ModelKind model, const PhysParams<double>& params = {});

}  // namespace vsw
