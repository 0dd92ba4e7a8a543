#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace vsw {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Finite-volume unknown q = (H, HU, HV, H Cxx, H Cyy, H Cxy / sqrt(Cxx Cyy), H Czz).
/// Its admissible set q1, q4, q5, q7 > 0, |q6| < q1 is convex.
template <typename Scalar>
using ConservedState = Eigen::Matrix<Scalar, 7, 1>;

class InadmissibleState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical cell state: depth, velocity and the conformation tensor (C_h, C_zz).
template <typename Scalar>
struct PrimitiveState {
  Scalar h{1};
  Scalar u{0};
  Scalar v{0};
  Scalar cxx{1};
  Scalar cyy{1};
  Scalar cxy{0};
  Scalar czz{1};

  Vector2<Scalar> velocity() const { return {u, v}; }

  Matrix2<Scalar> conformation() const {
    Matrix2<Scalar> c;
    c << cxx, cxy, cxy, cyy;
    return c;
  }

  Scalar det_ch() const { return cxx * cyy - cxy * cxy; }

  /// c_yy - c_xy^2 / c_xx, the Schur complement of c_xx (positive iff C_h is SPD).
  Scalar transverse_strain_complement() const { return cyy - cxy * cxy / cxx; }

  static PrimitiveState rest(Scalar depth) { return PrimitiveState{depth, 0, 0, 1, 1, 0, 1}; }

  bool operator==(const PrimitiveState&) const = default;
};

template <typename Scalar>
struct PhysParams {
  Scalar g{10};
  Scalar G{10};
  Scalar lambda{1};
  Scalar k{0};
  Scalar nu_s{0};

  void validate() const {
    if (!(g > 0)) throw std::invalid_argument("gravity g must be > 0");
    if (!(G >= 0)) throw std::invalid_argument("elastic modulus G must be >= 0");
    if (!(lambda > 0)) throw std::invalid_argument("relaxation time lambda must be > 0");
    if (!(k >= 0)) throw std::invalid_argument("friction k must be >= 0");
    if (!(nu_s >= 0)) throw std::invalid_argument("solvent viscosity nu_s must be >= 0");
  }
};

namespace detail {
// Positivity floor below which logarithms and divisions are refused.
inline constexpr double kPositivityFloor = 1e-300;

[[noreturn, gnu::cold, gnu::noinline]] inline void throw_not_positive(double value, const char* what) {
  throw InadmissibleState(std::string("inadmissible state: ") + what + " <= 0 (value " + std::to_string(value) + ")");
}

template <typename Scalar>
inline void require_positive(Scalar value, const char* what) {
  if (!(value > Scalar(kPositivityFloor))) [[unlikely]]
    throw_not_positive(static_cast<double>(value), what);
}
}  // namespace detail

template <typename Scalar>
void require_admissible(const PrimitiveState<Scalar>& p) {
  detail::require_positive(p.h, "h");
  detail::require_positive(p.cxx, "c_xx");
  detail::require_positive(p.cyy, "c_yy");
  detail::require_positive(p.czz, "c_zz");
  detail::require_positive(p.det_ch(), "det C_h");
}

template <typename Scalar>
ConservedState<Scalar> primitive_to_conserved(const PrimitiveState<Scalar>& p) {
  require_admissible(p);
  ConservedState<Scalar> q;
  q << p.h, p.h * p.u, p.h * p.v, p.h * p.cxx, p.h * p.cyy, p.h * p.cxy / std::sqrt(p.cxx * p.cyy),
      p.h * p.czz;
  return q;
}

template <typename Scalar>
PrimitiveState<Scalar> conserved_to_primitive(const ConservedState<Scalar>& q) {
  detail::require_positive(q[0], "q1 = H");
  detail::require_positive(q[3], "q4 = H C_xx");
  detail::require_positive(q[4], "q5 = H C_yy");
  detail::require_positive(q[6], "q7 = H C_zz");
  detail::require_positive(q[0] - std::abs(q[5]), "q1 - |q6|");
  PrimitiveState<Scalar> p;
  p.h = q[0];
  p.u = q[1] / q[0];
  p.v = q[2] / q[0];
  p.cxx = q[3] / q[0];
  p.cyy = q[4] / q[0];
  p.cxy = (q[5] / q[0]) * std::sqrt(p.cxx * p.cyy);
  p.czz = q[6] / q[0];
  return p;
}

struct Violation {
  std::string inequality;
  double margin;
};

struct AdmissibilityReport {
  std::vector<Violation> violations;
  bool admissible() const { return violations.empty(); }
};

/// Checks the linear inequalities of the convex admissible set. A margin must exceed
/// `relative_tolerance * scale` where scale is the largest magnitude among q1, q4, q5, q7.
template <typename Scalar>
AdmissibilityReport check_admissible(const ConservedState<Scalar>& q, double relative_tolerance = 0.0) {
  AdmissibilityReport report;
  const double scale = std::max({std::abs(double(q[0])), std::abs(double(q[3])), std::abs(double(q[4])),
                                  std::abs(double(q[6]))});
  const double floor = relative_tolerance * scale;
  auto check = [&](const char* name, Scalar margin) {
    if (!(double(margin) > floor)) report.violations.push_back({name, double(margin)});
  };
  check("q1>0", q[0]);
  check("q4>0", q[3]);
  check("q5>0", q[4]);
  check("q7>0", q[6]);
  check("|q6|<q1", q[0] - std::abs(q[5]));
  return report;
}

/// Helmholtz free energy per unit mass: |U|^2/2 + g h/2 + G tr(C - ln C - I)/2.
template <typename Scalar>
Scalar free_energy(const PrimitiveState<Scalar>& p, const PhysParams<Scalar>& params) {
  require_admissible(p);
  using std::log;
  const Scalar elastic = p.cxx + p.cyy + p.czz - log(p.det_ch()) - log(p.czz) - Scalar(3);
  return (p.u * p.u + p.v * p.v) / 2 + params.g * p.h / 2 + params.G * elastic / 2;
}

/// Mathematical entropy S = H E of a conserved state.
template <typename Scalar>
Scalar entropy(const ConservedState<Scalar>& q, const PhysParams<Scalar>& params) {
  return q[0] * free_energy(conserved_to_primitive(q), params);
}

template <typename Scalar>
struct EnergySplit {
  Scalar e_par;
  Scalar e_perp;
};

/// Longitudinal / transverse internal energies (normalised to vanish at C = I, h = 0),
/// so that (u^2 + v^2)/2 + e_par + e_perp equals the free energy exactly.
template <typename Scalar>
EnergySplit<Scalar> energy_split(const PrimitiveState<Scalar>& p, const PhysParams<Scalar>& params) {
  require_admissible(p);
  using std::log;
  const Scalar shear = p.cxy * p.cxy / p.cxx;
  const Scalar complement = p.cyy - shear;
  detail::require_positive(complement, "c_yy - c_xy^2/c_xx");
  EnergySplit<Scalar> e;
  e.e_par = params.g * p.h / 2 + params.G * (p.cxx + p.czz - log(p.cxx * p.czz) - Scalar(2)) / 2;
  e.e_perp = params.G * shear / 2 + params.G * (complement - log(complement) - Scalar(1)) / 2;
  return e;
}

}  // namespace vsw
