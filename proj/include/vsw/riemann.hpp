#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vsw/rheology.hpp"
#include "vsw/state.hpp"

namespace vsw {

class DegenerateParams : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterSearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------------------------
// Interface frame

/// State components in the basis (n, n_perp) with n_perp = (-n_y, n_x).
template <typename Scalar>
PrimitiveState<Scalar> rotate_to_local(const PrimitiveState<Scalar>& p, const Vector2<Scalar>& n) {
  const Scalar c = n.x(), s = n.y();
  PrimitiveState<Scalar> r;
  r.h = p.h;
  r.u = c * p.u + s * p.v;
  r.v = -s * p.u + c * p.v;
  r.cxx = c * c * p.cxx + 2 * c * s * p.cxy + s * s * p.cyy;
  r.cyy = s * s * p.cxx - 2 * c * s * p.cxy + c * c * p.cyy;
  r.cxy = c * s * (p.cyy - p.cxx) + (c * c - s * s) * p.cxy;
  r.czz = p.czz;
  return r;
}

template <typename Scalar>
PrimitiveState<Scalar> rotate_from_local(const PrimitiveState<Scalar>& p, const Vector2<Scalar>& n) {
  const Scalar c = n.x(), s = n.y();
  PrimitiveState<Scalar> r;
  r.h = p.h;
  r.u = c * p.u - s * p.v;
  r.v = s * p.u + c * p.v;
  r.cxx = c * c * p.cxx - 2 * c * s * p.cxy + s * s * p.cyy;
  r.cyy = s * s * p.cxx + 2 * c * s * p.cxy + c * c * p.cyy;
  r.cxy = c * s * (p.cxx - p.cyy) + (c * c - s * s) * p.cxy;
  r.czz = p.czz;
  return r;
}

template <typename Scalar>
PrimitiveState<Scalar> to_local_frame(const ConservedState<Scalar>& q, const Vector2<Scalar>& n) {
  return rotate_to_local(conserved_to_primitive(q), n);
}

template <typename Scalar>
ConservedState<Scalar> from_local_frame(const PrimitiveState<Scalar>& p_local, const Vector2<Scalar>& n) {
  return primitive_to_conserved(rotate_from_local(p_local, n));
}

template <typename Scalar>
struct LocalPair {
  PrimitiveState<Scalar> left;
  PrimitiveState<Scalar> right;
  Vector2<Scalar> normal{Scalar(1), Scalar(0)};
};

// ---------------------------------------------------------------------------------------------
// Relaxation parameters and fan

enum Side { kLeft = 0, kRight = 1 };

template <typename Scalar>
struct SideParams {
  Scalar c_par{};
  Scalar c_perp{};
  Scalar a_sq{};  // a^2
  Scalar b{};
};

struct SideFlags {
  bool cond1 = true;
  bool cond2 = true;
  bool cond3 = true;
  bool all() const { return cond1 && cond2 && cond3; }
};

template <typename Scalar>
struct RelaxationParams {
  std::array<SideParams<Scalar>, 2> side{};
  std::array<SideFlags, 2> entropy{};
  std::array<bool, 2> decoupled{false, false};  // transverse coupling dropped (b = 0) on that side
  int r_iterations = 0;
  int escalations = 0;
  bool entropy_ok() const { return entropy[kLeft].all() && entropy[kRight].all(); }
};

/// A fan state with its relaxation unknowns.
template <typename Scalar>
struct FanState {
  PrimitiveState<Scalar> p;
  Scalar pi_par{};
  Scalar pi_perp{};
  Scalar psi{};
  Scalar e_par_hat{};
  Scalar e_perp_hat{};
};

/// States q_l, q_l*, q_l#, q_r#, q_r*, q_r separated by the speeds xi_-2 .. xi_+2.
template <typename Scalar>
struct RiemannFan {
  std::array<FanState<Scalar>, 6> states{};
  std::array<Scalar, 5> speeds{};
  std::array<SideParams<Scalar>, 2> side{};
  ModelKind model = ModelKind::SVTM;

  const FanState<Scalar>& left() const { return states[0]; }
  const FanState<Scalar>& right() const { return states[5]; }
  Scalar u_star() const { return states[1].p.u; }
  Scalar pi_par_star() const { return states[1].pi_par; }
};

namespace detail {

template <typename Scalar>
FanState<Scalar> outer_state(const PrimitiveState<Scalar>& p, const PhysParams<Scalar>& params, ModelKind model) {
  FanState<Scalar> f;
  f.p = p;
  const auto m = model_coefficients(p, params, model);
  f.pi_par = m.p_par;
  f.pi_perp = m.p_perp;
  f.psi = m.psi;
  const auto e = energy_split(p, params);
  f.e_par_hat = e.e_par;
  f.e_perp_hat = e.e_perp;
  return f;
}

// 1/h* - 1/h on one side, given u* - u_o signed towards the interior of the fan.
template <typename Scalar>
struct StarLongitudinal {
  Scalar u_star;
  Scalar pi_star;
  Scalar inv_h_l;
  Scalar inv_h_r;
};

template <typename Scalar>
StarLongitudinal<Scalar> star_longitudinal(const FanState<Scalar>& l, const FanState<Scalar>& r, Scalar cl, Scalar cr) {
  StarLongitudinal<Scalar> s;
  s.u_star = l.p.u + (cr * (r.p.u - l.p.u) + (l.pi_par - r.pi_par)) / (cl + cr);
  s.pi_star = l.pi_par + cl * (l.p.u - s.u_star);
  s.inv_h_l = Scalar(1) / l.p.h + (s.u_star - l.p.u) / cl;
  s.inv_h_r = Scalar(1) / r.p.h + (r.p.u - s.u_star) / cr;
  return s;
}

}  // namespace detail

/// Closed-form 5-wave solution of the relaxation Riemann problem with per-side parameters.
template <typename Scalar>
RiemannFan<Scalar> solve_fan(const LocalPair<Scalar>& pair, const RelaxationParams<Scalar>& rp,
                             const PhysParams<Scalar>& params, ModelKind model) {
  RiemannFan<Scalar> fan;
  fan.model = model;
  fan.side = rp.side;
  const auto& L = rp.side[kLeft];
  const auto& R = rp.side[kRight];
  for (const auto* s : {&L, &R}) {
    if (!(s->c_par > 0) || !(s->c_perp > 0)) throw DegenerateParams("relaxation speeds must be positive");
    if (s->b != Scalar(0) && s->c_perp * s->c_perp == s->c_par * s->c_par)
      throw DegenerateParams("c_perp == c_par with b != 0");
  }

  const FanState<Scalar> ql = detail::outer_state(pair.left, params, model);
  const FanState<Scalar> qr = detail::outer_state(pair.right, params, model);
  const auto star = detail::star_longitudinal(ql, qr, L.c_par, R.c_par);
  const Scalar us = star.u_star;
  if (!(star.inv_h_l > 0) || !(star.inv_h_r > 0)) {
    throw InadmissibleState("relaxation fan has non-positive intermediate depth");
  }
  const Scalar hl = Scalar(1) / star.inv_h_l;
  const Scalar hr = Scalar(1) / star.inv_h_r;

  // Transverse star states (c_par waves).
  const Scalar vl = ql.p.v + L.b * (ql.p.u - us) / (L.c_perp * L.c_perp - L.c_par * L.c_par);
  const Scalar vr = qr.p.v + R.b * (qr.p.u - us) / (R.c_perp * R.c_perp - R.c_par * R.c_par);
  const Scalar pperp_l = ql.pi_perp - L.c_par * (vl - ql.p.v);
  const Scalar pperp_r = qr.pi_perp + R.c_par * (vr - qr.p.v);
  const Scalar psi_l = ql.psi - L.a_sq * (vl - ql.p.v) / L.c_par;
  const Scalar psi_r = qr.psi + R.a_sq * (vr - qr.p.v) / R.c_par;

  // Sharp states (c_perp waves).
  const Scalar vs = vl + (pperp_l - pperp_r + R.c_perp * (vr - vl)) / (L.c_perp + R.c_perp);
  const Scalar pperp_s = pperp_l + L.c_perp * (vl - vs);
  const Scalar psi_sl = psi_l + L.a_sq / (L.c_perp * L.c_perp) * (pperp_s - pperp_l);
  const Scalar psi_sr = psi_r + R.a_sq / (R.c_perp * R.c_perp) * (pperp_s - pperp_r);

  const auto inv_l = strong_invariants(pair.left, model);
  const auto inv_r = strong_invariants(pair.right, model);

  auto make = [&](const FanState<Scalar>& outer, const StrongInvariants<Scalar>& inv, Scalar h, Scalar v,
                  Scalar pi_perp, Scalar psi, Scalar c_par) {
    FanState<Scalar> f;
    f.p = state_from_invariants(h, us, v, inv, psi, model);
    f.pi_par = star.pi_star;
    f.pi_perp = pi_perp;
    f.psi = psi;
    f.e_par_hat = outer.e_par_hat + (star.pi_star * star.pi_star - outer.pi_par * outer.pi_par) / (2 * c_par * c_par);
    f.e_perp_hat = outer.e_perp_hat + (pi_perp * pi_perp - outer.pi_perp * outer.pi_perp) / (2 * c_par * c_par);
    return f;
  };
  FanState<Scalar> sl = make(ql, inv_l, hl, vl, pperp_l, psi_l, L.c_par);
  FanState<Scalar> sr = make(qr, inv_r, hr, vr, pperp_r, psi_r, R.c_par);

  auto sharpen = [&](const FanState<Scalar>& st, const StrongInvariants<Scalar>& inv, Scalar psi, Scalar c_perp) {
    FanState<Scalar> f = st;
    f.p = state_from_invariants(st.p.h, us, vs, inv, psi, model);
    f.pi_perp = pperp_s;
    f.psi = psi;
    f.e_perp_hat = st.e_perp_hat + (pperp_s * pperp_s - st.pi_perp * st.pi_perp) / (2 * c_perp * c_perp);
    return f;
  };
  FanState<Scalar> shl = sharpen(sl, inv_l, psi_sl, L.c_perp);
  FanState<Scalar> shr = sharpen(sr, inv_r, psi_sr, R.c_perp);

  fan.states = {ql, sl, shl, shr, sr, qr};
  fan.speeds = {ql.p.u - L.c_par / ql.p.h, us - L.c_perp / hl, us, us + R.c_perp / hr, qr.p.u + R.c_par / qr.p.h};
  return fan;
}

// ---------------------------------------------------------------------------------------------
// Entropy conditions

enum class Cond3Branch { General, NoTransverseForcing, ZeroCoupling };

template <typename Scalar>
struct SideConditions {
  // Direct margins ê - e(q) at the intermediate states; non-negative means the condition holds.
  Scalar cond1{};
  Scalar cond2{};
  Scalar cond3{};
  // Margins of the sufficient conditions (c_par^2 bound, and the P_perp-linearised forms).
  Scalar cond1_sufficient{};
  Scalar cond2_sufficient{};
  Scalar cond3_sufficient{};
  Cond3Branch branch = Cond3Branch::General;
  SideFlags flags{};
};

template <typename Scalar>
struct ConditionReport {
  std::array<SideConditions<Scalar>, 2> side{};
  bool all_hold() const { return side[kLeft].flags.all() && side[kRight].flags.all(); }
};

/// Relative slack used when comparing energies that agree mathematically.
inline constexpr double kConditionTolerance = 1e-12;

namespace detail {

template <typename Scalar>
bool margin_holds(Scalar margin, Scalar scale) {
  return margin >= -Scalar(kConditionTolerance) * (scale + Scalar(1e-300));
}

template <typename Scalar>
bool transverse_forcing_vanishes(const FanState<Scalar>& outer, const SideParams<Scalar>& sp, Scalar u_star) {
  if (sp.b == Scalar(0)) return true;
  const Scalar du = std::abs(u_star - outer.p.u);
  return du <= Scalar(kConditionTolerance) * (std::abs(outer.p.u) + std::abs(u_star) + sp.c_par / outer.p.h);
}

}  // namespace detail

template <typename Scalar>
ConditionReport<Scalar> check_entropy_conditions(const RiemannFan<Scalar>& fan, const PhysParams<Scalar>& params) {
  using std::abs;
  ConditionReport<Scalar> rep;
  const ModelKind model = fan.model;
  for (int o : {kLeft, kRight}) {
    const auto& sp = fan.side[o];
    const FanState<Scalar>& outer = fan.states[o == kLeft ? 0 : 5];
    const FanState<Scalar>& st = fan.states[o == kLeft ? 1 : 4];
    const FanState<Scalar>& sh = fan.states[o == kLeft ? 2 : 3];
    auto& sc = rep.side[o];

    const auto e_st = energy_split(st.p, params);
    const auto e_sh = energy_split(sh.p, params);
    sc.cond1 = st.e_par_hat - e_st.e_par;
    sc.cond2 = st.e_perp_hat - e_st.e_perp;
    sc.cond3 = sh.e_perp_hat - e_sh.e_perp;

    // c_par^2 against h^2 dP_par/dh, whose radicand increases with h along the frozen invariants.
    const Scalar h_worst = std::max(outer.p.h, st.p.h);
    const auto inv = strong_invariants(outer.p, model);
    const auto worst = state_from_invariants(h_worst, Scalar(0), Scalar(0), inv, Scalar(0), model);
    sc.cond1_sufficient = sp.c_par * sp.c_par - h_worst * h_worst * dh_p_par(worst, params, model);

    const Scalar c2 = sp.c_par * sp.c_par;
    const Scalar cp2 = sp.c_perp * sp.c_perp;
    const Scalar p_o = pressure_perp_from_psi(outer.p.h, outer.psi, params, model);
    const Scalar p_st = pressure_perp_from_psi(st.p.h, st.psi, params, model);
    const Scalar p_sh = pressure_perp_from_psi(sh.p.h, sh.psi, params, model);
    const Scalar lhs2 = e_st.e_perp - p_st * p_st / (2 * c2);
    const Scalar rhs2 = outer.e_perp_hat - p_o * p_o / (2 * c2) -
                        p_st * ((p_st - p_o) / c2 - st.psi / sp.a_sq + outer.psi / sp.a_sq);
    sc.cond2_sufficient = rhs2 - lhs2;
    const Scalar lhs3 = e_sh.e_perp - p_sh * p_sh / (2 * cp2) - (st.e_perp_hat - st.pi_perp * st.pi_perp / (2 * cp2)) +
                        p_sh * ((p_sh - st.pi_perp) / cp2 - sh.psi / sp.a_sq + st.psi / sp.a_sq);
    sc.cond3_sufficient = -lhs3;

    if (model == ModelKind::SVUCM)
      sc.branch = Cond3Branch::ZeroCoupling;
    else if (detail::transverse_forcing_vanishes(outer, sp, st.p.u))
      sc.branch = Cond3Branch::NoTransverseForcing;

    const Scalar scale1 = abs(st.e_par_hat) + abs(e_st.e_par);
    const Scalar scale2 = abs(st.e_perp_hat) + abs(e_st.e_perp) + abs(outer.e_perp_hat);
    const Scalar scale3 = abs(sh.e_perp_hat) + abs(e_sh.e_perp) + abs(outer.e_perp_hat);
    sc.flags.cond1 = detail::margin_holds(sc.cond1, scale1);
    sc.flags.cond2 = detail::margin_holds(sc.cond2, scale2);
    sc.flags.cond3 = detail::margin_holds(sc.cond3, scale3);
  }
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Parameter selection

struct SelectOptions {
  int max_r_iterations = 60;
  int max_escalations = 40;
  // Lower bound of (c_perp / c_par)^2, keeps the transverse waves from collapsing when G h^2 c_xx -> 0.
  double min_perp_ratio = 1e-8;
  // Stop the r -> 1 sequence once 1 - r is this small; c_perp = c_par is singular when b != 0.
  double min_r_gap = 1e-12;
  bool strict = false;
};

namespace detail {

template <typename Scalar>
Scalar initial_c_par(const FanState<Scalar>& self, const FanState<Scalar>& other, Scalar s_self, Scalar s_other,
                     Scalar du, Scalar dpi) {
  using std::max;
  const Scalar pos_du = max(du, Scalar(0));
  const Scalar pos_dpi = max(dpi, Scalar(0));
  return self.p.h * (s_self + 2 * (pos_du + pos_dpi / (self.p.h * s_self + other.p.h * s_other)));
}

inline std::string describe_pair(const LocalPair<double>& pair) {
  std::ostringstream os;
  os.precision(17);
  for (const auto* p : {&pair.left, &pair.right}) {
    os << "(h=" << p->h << " u=" << p->u << " v=" << p->v << " cxx=" << p->cxx << " cyy=" << p->cyy
       << " cxy=" << p->cxy << " czz=" << p->czz << ") ";
  }
  return os.str();
}

template <typename Scalar>
std::string describe_pair(const LocalPair<Scalar>&) {
  return "<pair>";
}

}  // namespace detail

template <typename Scalar>
struct Selection {
  RelaxationParams<Scalar> params;
  RiemannFan<Scalar> fan;
  ConditionReport<Scalar> report;
};

/// Chooses per-side relaxation speeds for which the entropy conditions hold, then returns the fan.
/// On exhaustion the last candidate is kept with its failing flags (unless options.strict).
template <typename Scalar>
Selection<Scalar> select_and_solve(const LocalPair<Scalar>& pair, const PhysParams<Scalar>& params, ModelKind model,
                                   const SelectOptions& opt = {}) {
  using std::sqrt;
  const FanState<Scalar> ql = detail::outer_state(pair.left, params, model);
  const FanState<Scalar> qr = detail::outer_state(pair.right, params, model);
  const Scalar sl = sqrt(dh_p_par(pair.left, params, model));
  const Scalar sr = sqrt(dh_p_par(pair.right, params, model));
  const Scalar du = ql.p.u - qr.p.u;
  std::array<Scalar, 2> c{detail::initial_c_par(ql, qr, sl, sr, du, qr.pi_par - ql.pi_par),
                          detail::initial_c_par(qr, ql, sr, sl, du, ql.pi_par - qr.pi_par)};
  const std::array<const FanState<Scalar>*, 2> outer{&ql, &qr};

  Selection<Scalar> sel;
  RelaxationParams<Scalar>& rp = sel.params;
  bool have_candidate = false;

  for (int esc = 0; esc <= opt.max_escalations; ++esc) {
    rp.escalations = esc;
    const auto star = detail::star_longitudinal(ql, qr, c[kLeft], c[kRight]);
    const std::array<Scalar, 2> inv_h{star.inv_h_l, star.inv_h_r};
    std::array<bool, 2> escalate{false, false};
    for (int o : {kLeft, kRight}) escalate[o] = !(inv_h[o] > 0);
    if (escalate[kLeft] || escalate[kRight]) {
      for (int o : {kLeft, kRight})
        if (escalate[o]) c[o] *= 2;
      continue;
    }

    std::array<Scalar, 2> r{};
    std::array<Scalar, 2> previous_margin{};
    for (int o : {kLeft, kRight}) {
      const auto& p = outer[o]->p;
      auto& sp = rp.side[o];
      sp.c_par = c[o];
      const Scalar h2 = p.h * p.h;
      const Scalar r0 = std::max(params.G * h2 * p.cxx / (c[o] * c[o]), Scalar(opt.min_perp_ratio));
      r[o] = r0;
      rp.decoupled[o] = false;
      previous_margin[o] = -std::numeric_limits<Scalar>::infinity();
      if (model == ModelKind::SVUCM) {
        sp.a_sq = p.cxx * h2;
        sp.b = Scalar(0);
      } else {
        const Scalar h_star = Scalar(1) / inv_h[o];
        const Scalar cxx_star = strong_invariants(p, model).i1 * h_star * h_star;
        sp.a_sq = std::min(p.cxx, 2 * r0 * cxx_star / (1 + r0));
        sp.b = 2 * params.G * h2 * p.cxy;
      }
      sp.c_perp = sqrt(r[o]) * c[o];
    }

    // Decoupled transverse wave: b = 0 and a^2 = c_xx at the outer state make the transverse
    // relaxation energy-consistent, so cond2 holds with equality and cond3 whenever
    // c_perp^2 >= G h^2 c_xx.
    auto decouple = [&](int o) {
      const auto& p = outer[o]->p;
      auto& sp = rp.side[o];
      const Scalar k = params.G * p.h * p.h * p.cxx;
      sp.b = Scalar(0);
      sp.a_sq = model == ModelKind::SVUCM ? p.cxx * p.h * p.h : p.cxx;
      sp.c_perp = sqrt(std::max(k, Scalar(opt.min_perp_ratio) * c[o] * c[o]));
      rp.decoupled[o] = true;
    };

    const int max_steps = opt.max_r_iterations + 2;
    for (int it = 0; it <= max_steps; ++it) {
      bool solved = true;
      try {
        sel.fan = solve_fan(pair, rp, params, model);
        sel.report = check_entropy_conditions(sel.fan, params);
      } catch (const InadmissibleState&) {
        // Runaway transverse states lose the conformation tensor to round-off.
        solved = false;
      }
      if (!solved) {
        bool changed = false;
        for (int o : {kLeft, kRight}) {
          if (!rp.decoupled[o] && rp.side[o].b != Scalar(0)) {
            decouple(o);
            changed = true;
          }
        }
        if (!changed) {
          escalate = {true, true};
          break;
        }
        continue;
      }
      have_candidate = true;
      for (int o : {kLeft, kRight}) rp.entropy[o] = sel.report.side[o].flags;
      if (sel.report.all_hold()) return sel;

      std::array<bool, 2> raise_r{false, false};
      bool changed = false;
      for (int o : {kLeft, kRight}) {
        const auto& sc = sel.report.side[o];
        if (!sc.flags.cond1) {
          escalate[o] = true;
          continue;
        }
        if (sc.flags.cond2 && sc.flags.cond3) continue;
        const Scalar margin = std::min(sc.cond2, sc.cond3);
        const bool improving = margin > previous_margin[o];
        previous_margin[o] = margin;
        if (rp.decoupled[o]) {
          escalate[o] = true;
        } else if (sc.branch == Cond3Branch::General && improving && it < opt.max_r_iterations &&
                   Scalar(1) - r[o] >= Scalar(opt.min_r_gap)) {
          raise_r[o] = true;
        } else {
          decouple(o);
          changed = true;
        }
      }
      if (escalate[kLeft] || escalate[kRight]) break;
      for (int o : {kLeft, kRight}) {
        if (!raise_r[o]) continue;
        r[o] = Scalar(1) - (Scalar(1) - r[o]) / 2;
        rp.side[o].c_perp = sqrt(r[o]) * c[o];
        ++rp.r_iterations;
        changed = true;
      }
      if (!changed) {
        escalate = {true, true};
        break;
      }
    }
    if (!escalate[kLeft] && !escalate[kRight]) escalate = {true, true};
    for (int o : {kLeft, kRight})
      if (escalate[o]) c[o] *= 2;
  }

  if (opt.strict || !have_candidate) {
    throw ParameterSearchExhausted("relaxation parameter search exhausted for pair " + detail::describe_pair(pair));
  }
  return sel;
}

template <typename Scalar>
RelaxationParams<Scalar> select_params(const LocalPair<Scalar>& pair, const PhysParams<Scalar>& params, ModelKind model,
                                       const SelectOptions& opt = {}) {
  return select_and_solve(pair, params, model, opt).params;
}

// ---------------------------------------------------------------------------------------------
// Fluxes and cell increments

template <typename Scalar>
Scalar entropy_flux_of(const FanState<Scalar>& f) {
  const auto& p = f.p;
  return p.h * p.u * ((p.u * p.u + p.v * p.v) / 2 + f.e_par_hat + f.e_perp_hat) + f.pi_par * p.u + f.pi_perp * p.v;
}

/// Index k of the fan state occupying x/t = 0, or -1 when 0 coincides with a speed.
template <typename Scalar>
int state_at_origin(const RiemannFan<Scalar>& fan, int* tie_speed = nullptr) {
  for (int k = 0; k < 5; ++k) {
    if (fan.speeds[k] == Scalar(0)) {
      if (tie_speed) *tie_speed = k;
      return -1;
    }
    if (fan.speeds[k] > Scalar(0)) return k;
  }
  return 5;
}

/// Numerical entropy flux at x/t = 0 (averaging the two neighbours when a wave sits on the interface).
template <typename Scalar>
Scalar fan_entropy_flux(const RiemannFan<Scalar>& fan) {
  int tie = -1;
  const int k = state_at_origin(fan, &tie);
  if (k >= 0) return entropy_flux_of(fan.states[k]);
  return (entropy_flux_of(fan.states[tie]) + entropy_flux_of(fan.states[tie + 1])) / 2;
}

template <typename Scalar>
struct InterfaceUpdate {
  ConservedState<Scalar> delta_left;   // integral over x/t < 0 of (R - q_l), global frame
  ConservedState<Scalar> delta_right;  // integral over x/t > 0 of (R - q_r), global frame
  Eigen::Matrix<Scalar, 3, 1> flux;    // (mass, momentum_x, momentum_y) numerical flux along n
  Scalar smax{};
  Scalar entropy_flux{};
};

/// Per-unit-time cell increments of the fan integral. `cap` is the admissible time fraction
/// (sum |Gamma|/|V|)^-1 / tau; pass +inf to skip the check.
template <typename Scalar>
InterfaceUpdate<Scalar> interface_update(const RiemannFan<Scalar>& fan, const Vector2<Scalar>& n,
                                         Scalar cap = std::numeric_limits<Scalar>::infinity()) {
  using std::max;
  using std::min;
  InterfaceUpdate<Scalar> out;
  out.smax = max(std::abs(fan.speeds[0]), std::abs(fan.speeds[4]));
  if (cap < out.smax) throw CapTooSmall("time-step cap below the fan's maximal speed");

  std::array<ConservedState<Scalar>, 6> q;
  for (int k = 0; k < 6; ++k) q[k] = from_local_frame(fan.states[k].p, n);

  out.delta_left.setZero();
  out.delta_right.setZero();
  for (int k = 1; k < 6; ++k) {
    const Scalar hi = k < 5 ? min(fan.speeds[k], Scalar(0)) : Scalar(0);
    const Scalar width = hi - min(fan.speeds[k - 1], Scalar(0));
    if (width != Scalar(0)) out.delta_left += width * (q[k] - q[0]);
  }
  for (int k = 0; k < 5; ++k) {
    const Scalar lo = k > 0 ? max(fan.speeds[k - 1], Scalar(0)) : Scalar(0);
    const Scalar width = max(fan.speeds[k], Scalar(0)) - lo;
    if (width != Scalar(0)) out.delta_right += width * (q[k] - q[5]);
  }

  const auto& l = fan.states[0];
  const Scalar mass = l.p.h * l.p.u - out.delta_left[0];
  const Vector2<Scalar> mom_local{l.p.h * l.p.u * l.p.u + l.pi_par, l.p.h * l.p.u * l.p.v + l.pi_perp};
  const Vector2<Scalar> mom_flux_global{n.x() * mom_local.x() - n.y() * mom_local.y(),
                                        n.y() * mom_local.x() + n.x() * mom_local.y()};
  out.flux << mass, mom_flux_global.x() - out.delta_left[1], mom_flux_global.y() - out.delta_left[2];
  out.entropy_flux = fan_entropy_flux(fan);
  return out;
}

/// Integrals of S(R) - S(q_o) over each half of the fan (per unit time).
template <typename Scalar>
std::array<Scalar, 2> fan_entropy_integrals(const RiemannFan<Scalar>& fan, const PhysParams<Scalar>& params) {
  using std::max;
  using std::min;
  std::array<Scalar, 6> s;
  for (int k = 0; k < 6; ++k) s[k] = fan.states[k].p.h * free_energy(fan.states[k].p, params);
  Scalar left = 0, right = 0;
  for (int k = 1; k < 6; ++k) {
    const Scalar hi = k < 5 ? min(fan.speeds[k], Scalar(0)) : Scalar(0);
    left += (hi - min(fan.speeds[k - 1], Scalar(0))) * (s[k] - s[0]);
  }
  for (int k = 0; k < 5; ++k) {
    const Scalar lo = k > 0 ? max(fan.speeds[k - 1], Scalar(0)) : Scalar(0);
    right += (max(fan.speeds[k], Scalar(0)) - lo) * (s[k] - s[5]);
  }
  return {left, right};
}

/// Exact physical entropy flux G(q) . n of an equilibrium state in the local frame.
template <typename Scalar>
Scalar physical_entropy_flux(const PrimitiveState<Scalar>& p, const PhysParams<Scalar>& params, ModelKind model) {
  const auto m = model_coefficients(p, params, model);
  return p.h * p.u * free_energy(p, params) + m.p_par * p.u + m.p_perp * p.v;
}

}  // namespace vsw
