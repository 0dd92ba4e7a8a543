#include "vsw/fuzz.hpp"

#include <algorithm>

namespace vsw {

FuzzSummary fuzz_riemann(long pairs, std::uint64_t seed, ModelKind model, const PhysParams<double>& params) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * 3.141592653589793);
  FuzzSummary out;
  for (long k = 0; k < pairs; ++k) {
    const auto gl = random_admissible_state(rng), gr = random_admissible_state(rng);
    const double th = angle(rng);
    const Vector2<double> n(std::cos(th), std::sin(th));
    const LocalPair<double> pair{rotate_to_local(gl, n), rotate_to_local(gr, n), n};
    const auto sel = select_and_solve(pair, params, model);
    ++out.pairs;

    const auto audit = invariant_audit(sel.fan);
    if (audit.max_residual > out.max_audit_residual) {
      out.max_audit_residual = audit.max_residual;
      out.worst_invariant = audit.worst;
    }
    for (const auto& s : sel.fan.states)
      if (!check_admissible(primitive_to_conserved(s.p)).admissible()) ++out.admissibility_violations;

    if (!sel.report.all_hold()) {
      ++out.failed_conditions;
      continue;
    }
    const auto ints = fan_entropy_integrals(sel.fan, params);
    const double gt = fan_entropy_flux(sel.fan);
    const double fl = physical_entropy_flux(pair.left, params, model);
    const double fr = physical_entropy_flux(pair.right, params, model);
    const double scale = std::abs(fl) + std::abs(fr) + std::abs(ints[0]) + std::abs(ints[1]) + 1e-30;
    const double excess = std::max(ints[0] - (fl - gt), ints[1] - (gt - fr)) / scale;
    out.worst_entropy_excess = std::max(out.worst_entropy_excess, excess);
    if (excess > 1e-10) ++out.entropy_violations;
  }
  return out;
}

}  // namespace vsw
