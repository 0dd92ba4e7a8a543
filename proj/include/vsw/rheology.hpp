#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vsw/state.hpp"

namespace vsw {

enum class ModelKind { SVUCM, SVTM };

inline std::string_view to_string(ModelKind m) { return m == ModelKind::SVUCM ? "svucm" : "svtm"; }

inline ModelKind parse_model(std::string_view s) {
  if (s == "svucm" || s == "SVUCM") return ModelKind::SVUCM;
  if (s == "svtm" || s == "SVTM") return ModelKind::SVTM;
  throw std::invalid_argument("unknown model '" + std::string(s) + "' (expected svucm or svtm)");
}

template <typename Scalar>
struct Stress {
  Matrix2<Scalar> sigma_h;
  Scalar sigma_zz;
};

/// Specific elastic stress. SVTM: G(I - C), SVUCM: G(C - I).
template <typename Scalar>
Stress<Scalar> stress(const PrimitiveState<Scalar>& p, Scalar G, ModelKind model) {
  const Scalar sign = model == ModelKind::SVUCM ? Scalar(1) : Scalar(-1);
  Stress<Scalar> s;
  s.sigma_h = sign * G * (p.conformation() - Matrix2<Scalar>::Identity());
  s.sigma_zz = sign * G * (p.czz - Scalar(1));
  return s;
}

/// Smooth-case quantities of the 1D projection along x.
template <typename Scalar>
struct ModelCoefficients {
  Scalar p_par;
  Scalar p_perp;
  Scalar c_par_sq;
  Scalar c_perp_sq;
  Scalar a_sq;
  Scalar b;
  Scalar psi;
};

/// d(P_par)/dh at frozen strong invariants, i.e. c_par^2 / h^2.
template <typename Scalar>
Scalar dh_p_par(const PrimitiveState<Scalar>& p, const PhysParams<Scalar>& params, ModelKind model) {
  if (model == ModelKind::SVTM) return params.g * p.h + params.G * (3 * p.cxx + p.czz);
  return params.g * p.h + params.G * (3 * p.czz + p.cxx);
}

template <typename Scalar>
Scalar pressure_par(const PrimitiveState<Scalar>& p, const PhysParams<Scalar>& params, ModelKind model) {
  const Scalar elastic = model == ModelKind::SVTM ? p.cxx - p.czz : p.czz - p.cxx;
  return params.g * p.h * p.h / 2 + params.G * p.h * elastic;
}

template <typename Scalar>
Scalar transverse_strain(const PrimitiveState<Scalar>& p, ModelKind model) {
  return model == ModelKind::SVTM ? p.cxy / p.h : -p.h * p.cxy;
}

/// P_perp as a function of h and the transverse strain psi.
template <typename Scalar>
Scalar pressure_perp_from_psi(Scalar h, Scalar psi, const PhysParams<Scalar>& params, ModelKind model) {
  return model == ModelKind::SVTM ? params.G * h * h * psi : params.G * psi;
}

template <typename Scalar>
ModelCoefficients<Scalar> model_coefficients(const PrimitiveState<Scalar>& p, const PhysParams<Scalar>& params,
                                             ModelKind model) {
  require_admissible(p);
  ModelCoefficients<Scalar> m;
  const Scalar h2 = p.h * p.h;
  m.p_par = pressure_par(p, params, model);
  m.c_par_sq = h2 * dh_p_par(p, params, model);
  m.c_perp_sq = params.G * h2 * p.cxx;
  m.psi = transverse_strain(p, model);
  m.p_perp = pressure_perp_from_psi(p.h, m.psi, params, model);
  if (model == ModelKind::SVTM) {
    m.a_sq = p.cxx;
    m.b = 2 * params.G * h2 * p.cxy;
  } else {
    m.a_sq = p.cxx * h2;
    m.b = Scalar(0);
  }
  return m;
}

template <typename Scalar>
struct StrongInvariants {
  Scalar i1;
  Scalar i2;
  Scalar i3;
};

template <typename Scalar>
StrongInvariants<Scalar> strong_invariants(const PrimitiveState<Scalar>& p, ModelKind model) {
  require_admissible(p);
  const Scalar h2 = p.h * p.h;
  const Scalar i3 = p.transverse_strain_complement();
  if (model == ModelKind::SVTM) return {p.cxx / h2, h2 * p.czz, i3};
  return {h2 * p.cxx, p.czz / h2, i3};
}

/// Inverse of (h, strong invariants, psi) -> conformation, keeping u and v.
template <typename Scalar>
PrimitiveState<Scalar> state_from_invariants(Scalar h, Scalar u, Scalar v, const StrongInvariants<Scalar>& inv,
                                             Scalar psi, ModelKind model) {
  PrimitiveState<Scalar> p;
  p.h = h;
  p.u = u;
  p.v = v;
  const Scalar h2 = h * h;
  if (model == ModelKind::SVTM) {
    p.cxx = inv.i1 * h2;
    p.czz = inv.i2 / h2;
    p.cxy = psi * h;
  } else {
    p.cxx = inv.i1 / h2;
    p.czz = inv.i2 * h2;
    p.cxy = -psi / h;
  }
  p.cyy = inv.i3 + p.cxy * p.cxy / p.cxx;
  return p;
}

/// Backward-Euler step of the friction and relaxation sources; a convex combination with rest.
template <typename Scalar>
PrimitiveState<Scalar> relax_source_step(const PrimitiveState<Scalar>& p, Scalar tau, const PhysParams<Scalar>& params) {
  PrimitiveState<Scalar> r = p;
  const Scalar friction = Scalar(1) + tau * params.k;
  r.u = p.u / friction;
  r.v = p.v / friction;
  const Scalar w = tau / params.lambda;
  const Scalar denom = Scalar(1) + w;
  r.cxx = (p.cxx + w) / denom;
  r.cyy = (p.cyy + w) / denom;
  r.cxy = p.cxy / denom;
  r.czz = (p.czz + w) / denom;
  return r;
}

/// Free-energy dissipation rate G(tr C + tr C^-1 - 6)/(2 lambda) over the full 3D tensor.
template <typename Scalar>
Scalar dissipation(const PrimitiveState<Scalar>& p, const PhysParams<Scalar>& params) {
  require_admissible(p);
  const Scalar det = p.det_ch();
  const Scalar tr = p.cxx + p.cyy;
  const Scalar tr_inv = tr / det;
  return params.G * (tr + tr_inv - Scalar(4) + p.czz + Scalar(1) / p.czz - Scalar(2)) / (2 * params.lambda);
}

template <typename Scalar>
struct JsEigenvalues {
  bool hyperbolic;
  std::array<Scalar, 4> values;  // ascending when hyperbolic
  Scalar delta;
  Scalar discriminant;  // Delta + A - sqrt(Delta^2 + (4 G zeta c_xy)^2); real iff >= 0
};

/// Eigenvalues of the 1D Gordon-Schowalter (slip parameter zeta) system, diagnostic only.
template <typename Scalar>
JsEigenvalues<Scalar> js_eigenvalues(const PrimitiveState<Scalar>& p, const PhysParams<Scalar>& params, Scalar zeta) {
  using std::sqrt;
  const Scalar G = params.G;
  JsEigenvalues<Scalar> out{};
  out.delta = 2 * params.g * p.h + G * (2 * (3 - 2 * zeta) * p.czz + zeta * p.cyy - 3 * zeta * p.cxx);
  const Scalar a = G * ((4 - 2 * zeta) * p.cxx - 2 * zeta * p.cyy);
  const Scalar x = 4 * G * zeta * p.cxy;
  const Scalar root = sqrt(out.delta * out.delta + x * x);
  out.discriminant = out.delta + a - root;
  out.hyperbolic = out.discriminant >= 0;
  if (out.hyperbolic) {
    const Scalar fast = sqrt(out.delta + a + root) / 2;
    const Scalar slow = sqrt(out.discriminant) / 2;
    out.values = {p.u - fast, p.u - slow, p.u + slow, p.u + fast};
  } else {
    const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
    out.values = {nan, nan, nan, nan};
  }
  return out;
}

}  // namespace vsw
