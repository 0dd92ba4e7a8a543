#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

#include "vsw/riemann.hpp"

namespace vsw {

/// Largest relative jump of a weak Riemann invariant across the wave it must cross unchanged.
struct AuditResult {
  double max_residual = 0.0;
  std::string worst;  // "<invariant>@<wave>"
  int wave = -1;
};

namespace detail {

struct Term {
  double value;
  double magnitude;
};

inline Term term_sum(std::initializer_list<double> parts) {
  double v = 0, m = 0;
  for (double p : parts) {
    v += p;
    m += std::abs(p);
  }
  return {v, m};
}

}  // namespace detail

template <typename Scalar>
AuditResult invariant_audit(const RiemannFan<Scalar>& fan) {
  using detail::Term;
  using detail::term_sum;
  AuditResult res;
  const ModelKind model = fan.model;

  auto record = [&](const char* name, int wave, Term a, Term b) {
    const double scale = a.magnitude + b.magnitude;
    if (scale == 0) return;
    const double r = std::abs(a.value - b.value) / scale;
    if (res.wave < 0 || r > res.max_residual) {
      res.max_residual = r;
      res.worst = std::string(name) + "@" + std::to_string(wave);
      res.wave = wave;
    }
  };

  for (int w = 0; w < 5; ++w) {
    const auto& a = fan.states[w];
    const auto& b = fan.states[w + 1];
    const double xi = fan.speeds[w];
    const int side = w < 2 ? kLeft : kRight;
    const auto& sp = fan.side[side];
    const double c = sp.c_par, cp = sp.c_perp;

    // Rankine-Hugoniot relations of the conservative part hold across every wave.
    auto mass_flux = [&](const FanState<Scalar>& s) { return term_sum({s.p.h * s.p.u, -s.p.h * xi}); };
    auto mom_flux = [&](const FanState<Scalar>& s) {
      const double j = s.p.h * (s.p.u - xi);
      return term_sum({j * s.p.u, s.pi_par});
    };
    auto tmom_flux = [&](const FanState<Scalar>& s) {
      const double j = s.p.h * (s.p.u - xi);
      return term_sum({j * s.p.v, s.pi_perp});
    };
    record("mass_flux", w, mass_flux(a), mass_flux(b));
    record("momentum_flux", w, mom_flux(a), mom_flux(b));
    record("transverse_momentum_flux", w, tmom_flux(a), tmom_flux(b));

    if (w != 2) {
      const auto ia = strong_invariants(a.p, model);
      const auto ib = strong_invariants(b.p, model);
      record("I1", w, {ia.i1, std::abs(ia.i1)}, {ib.i1, std::abs(ib.i1)});
      record("I2", w, {ia.i2, std::abs(ia.i2)}, {ib.i2, std::abs(ib.i2)});
      record("I3", w, {ia.i3, std::abs(ia.i3)}, {ib.i3, std::abs(ib.i3)});
      auto tau = [&](const FanState<Scalar>& s) { return term_sum({s.pi_par / (c * c), 1 / s.p.h}); };
      record("pi_par/c^2+1/h", w, tau(a), tau(b));
    }

    if (w == 0 || w == 4) {
      const double sgn = w == 0 ? 1.0 : -1.0;
      auto lon = [&](const FanState<Scalar>& s) { return term_sum({s.pi_par, sgn * c * s.p.u}); };
      auto tra = [&](const FanState<Scalar>& s) { return term_sum({s.pi_perp, sgn * c * s.p.v}); };
      auto coupling = [&](const FanState<Scalar>& s) {
        return term_sum({sp.b * s.p.u, cp * cp * s.p.v, -c * c * s.p.v});
      };
      auto strain = [&](const FanState<Scalar>& s) { return term_sum({sp.a_sq * s.pi_perp / (c * c), -s.psi}); };
      auto epar = [&](const FanState<Scalar>& s) {
        return term_sum({s.e_par_hat, -s.pi_par * s.pi_par / (2 * c * c)});
      };
      auto eperp = [&](const FanState<Scalar>& s) {
        return term_sum({s.e_perp_hat, -s.pi_perp * s.pi_perp / (2 * c * c)});
      };
      record("pi_par+-c_par*u", w, lon(a), lon(b));
      record("pi_perp+-c_par*v", w, tra(a), tra(b));
      record("b*u+(c_perp^2-c_par^2)*v", w, coupling(a), coupling(b));
      record("a^2*pi_perp/c_par^2-psi", w, strain(a), strain(b));
      record("e_par_hat-pi_par^2/2c_par^2", w, epar(a), epar(b));
      record("e_perp_hat-pi_perp^2/2c_par^2", w, eperp(a), eperp(b));
    } else if (w == 1 || w == 3) {
      const double sgn = w == 1 ? 1.0 : -1.0;
      auto one = [](double x) { return Term{x, std::abs(x)}; };
      record("u", w, one(a.p.u), one(b.p.u));
      record("pi_par", w, one(a.pi_par), one(b.pi_par));
      record("h", w, one(a.p.h), one(b.p.h));
      record("e_par_hat", w, one(a.e_par_hat), one(b.e_par_hat));
      auto tra = [&](const FanState<Scalar>& s) { return term_sum({s.pi_perp, sgn * cp * s.p.v}); };
      auto strain = [&](const FanState<Scalar>& s) { return term_sum({sp.a_sq * s.pi_perp, -cp * cp * s.psi}); };
      auto eperp = [&](const FanState<Scalar>& s) {
        return term_sum({s.e_perp_hat, -s.pi_perp * s.pi_perp / (2 * cp * cp)});
      };
      record("pi_perp+-c_perp*v", w, tra(a), tra(b));
      record("a^2*pi_perp-c_perp^2*psi", w, strain(a), strain(b));
      record("e_perp_hat-pi_perp^2/2c_perp^2", w, eperp(a), eperp(b));
    } else {
      auto one = [](double x) { return Term{x, std::abs(x)}; };
      record("u", w, one(a.p.u), one(b.p.u));
      record("pi_par", w, one(a.pi_par), one(b.pi_par));
      record("v", w, one(a.p.v), one(b.p.v));
      record("pi_perp", w, one(a.pi_perp), one(b.pi_perp));
    }
  }

  // Every state carries a transverse strain consistent with its conformation tensor.
  for (int k = 0; k < 6; ++k) {
    const auto& s = fan.states[k];
    const double psi = transverse_strain(s.p, model);
    record("psi(state)", k, {s.psi, std::abs(s.psi)}, {psi, std::abs(psi)});
  }
  return res;
}

}  // namespace vsw
