#include "vsw/bench.hpp"

#include <cmath>
#include <stdexcept>

#include "vsw/exact_sum.hpp"

namespace vsw {

PrimitiveState<double> stoker_ic(double x, double y) {
  return PrimitiveState<double>::rest(x + y < 1 ? 3.0 : 1.0);
}

PrimitiveState<double> column_ic(double x, double y) {
  const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
  return PrimitiveState<double>::rest(r2 < 0.2 ? 3.0 : 1.0);
}

BenchmarkPreset stoker_preset(ModelKind model) {
  BenchmarkPreset p;
  p.name = "stoker";
  p.ic = stoker_ic;
  // The solution is invariant along the dam line, direction (1, -1).
  p.bc = BoundarySpec::all(BoundaryCondition::translation_invariant(1, -1));
  p.params = {10, 10, 1, 0, 0};
  p.model = model;
  p.t_end = 0.2;
  return p;
}

BenchmarkPreset column_preset(double G, ModelKind model) {
  BenchmarkPreset p;
  p.name = "column";
  p.ic = column_ic;
  p.bc = BoundarySpec::all(BoundaryCondition::outflow());
  p.params = {10, G, 1, 0, 0};
  p.model = model;
  p.t_end = 0.2;
  return p;
}

BenchmarkPreset cavity_preset(double G, double lambda, double nu_s, double g, bool regularized_lid) {
  BenchmarkPreset p;
  p.name = "cavity";
  p.ic = [](double, double) { return PrimitiveState<double>::rest(1.0); };
  p.bc = BoundarySpec::all(BoundaryCondition::no_slip_wall());
  p.bc.at(Edge::kNorth) = BoundaryCondition::no_slip_wall({1.0, 0.0}, regularized_lid);
  p.params = {g, G, lambda, 0, nu_s};
  p.model = ModelKind::SVTM;
  p.t_end = 1;
  return p;
}

std::vector<BenchmarkPreset> cavity_sweep() {
  std::vector<BenchmarkPreset> out;
  for (double G : {0.1, 1.0})
    for (double lambda : {0.1, 1.0}) out.push_back(cavity_preset(G, lambda));
  return out;
}

std::vector<std::string> preset_names() { return {"stoker", "column", "cavity"}; }

BenchmarkPreset preset_by_name(const std::string& name) {
  if (name == "stoker") return stoker_preset();
  if (name == "column") return column_preset();
  if (name == "cavity") return cavity_preset();
  throw std::invalid_argument("unknown preset: " + name);
}

Mesh preset_mesh(const BenchmarkPreset& p) { return build_cartesian_mesh(p.nx, p.ny, p.lx, p.ly); }

FieldState preset_initial_state(const BenchmarkPreset& p, const Mesh& mesh) { return sample_field(mesh, p.ic); }

RunHistory run_until(FieldState state, const Mesh& mesh, const BoundarySpec& bc, const PhysParams<double>& params,
                     ModelKind model, double t_end, const EngineOptions& opt, const StepObserver& on_step) {
  params.validate();
  RunHistory h;
  h.initial = totals(state, mesh, params);
  while (state.t < t_end) {
    auto r = advance(state, mesh, bc, params, model, opt, t_end - state.t);
    // Land exactly on t_end when the clipped step rounds short.
    if (t_end - r.state.t <= 1e-14 * t_end) r.state.t = t_end;
    if (on_step) on_step(state, r);
    h.steps.push_back(r.diag);
    state = std::move(r.state);
  }
  h.state = std::move(state);
  return h;
}

RunHistory run_preset(const BenchmarkPreset& p, const EngineOptions& opt, const StepObserver& on_step) {
  const auto mesh = preset_mesh(p);
  return run_until(preset_initial_state(p, mesh), mesh, p.bc, p.params, p.model, p.t_end, opt, on_step);
}

Strip make_strip(const PrimitiveState<double>& left, const PrimitiveState<double>& right, int n, double length) {
  Strip s;
  s.mesh = build_cartesian_mesh(n, 1, length, length / n);
  s.bc = BoundarySpec::all(BoundaryCondition::translation_invariant(0, 1));
  s.bc.at(Edge::kWest) = BoundaryCondition::outflow();
  s.bc.at(Edge::kEast) = BoundaryCondition::outflow();
  const double mid = length / 2;
  s.state = sample_field(s.mesh, [&](double x, double) { return x < mid ? left : right; });
  return s;
}

Profile reference_1d_solve(const PrimitiveState<double>& left, const PrimitiveState<double>& right, int n, double t_end,
                           const PhysParams<double>& params, ModelKind model, double length,
                           const EngineOptions& opt) {
  auto strip = make_strip(left, right, n, length);
  const auto run = run_until(strip.state, strip.mesh, strip.bc, params, model, t_end, opt);
  return strip_profile(run.state, strip.mesh, params, model);
}

double stationarity_metric(const FieldState& prev, const FieldState& next) {
  if (prev.q.size() != next.q.size()) throw std::invalid_argument("stationarity_metric: mismatched fields");
  ExactSum s;
  for (std::size_t c = 0; c < prev.q.size(); ++c)
    for (int k = 0; k < 7; ++k) s.add(std::abs(next.q[c][k] - prev.q[c][k]));
  return s.value();
}

DamBreakSolution classical_dam_break(double hl, double hr, double g) {
  if (!(hl > hr) || !(hr > 0)) throw std::invalid_argument("dam break needs h_left > h_right > 0");
  // Rarefaction and shock velocities of the middle state; their difference is monotone in h.
  auto mismatch = [&](double h) {
    const double u_rare = 2 * (std::sqrt(g * hl) - std::sqrt(g * h));
    const double u_shock = (h - hr) * std::sqrt(g * (h + hr) / (2 * h * hr));
    return u_rare - u_shock;
  };
  double lo = hr, hi = hl;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hl; ++it) {
    const double mid = (lo + hi) / 2;
    (mismatch(mid) > 0 ? lo : hi) = mid;
  }
  DamBreakSolution s;
  s.h_mid = (lo + hi) / 2;
  s.u_mid = 2 * (std::sqrt(g * hl) - std::sqrt(g * s.h_mid));
  s.shock_speed = s.h_mid * s.u_mid / (s.h_mid - hr);
  return s;
}

double front_position(const Profile& profile, double h_right, double h_plateau) {
  const double level = (h_right + h_plateau) / 2;
  for (std::size_t k = profile.size() - 1; k > 0; --k) {
    const double a = profile[k - 1].p.h, b = profile[k].p.h;
    if (a >= level && b < level) {
      const double w = (a - level) / (a - b);
      return profile[k - 1].s + w * (profile[k].s - profile[k - 1].s);
    }
  }
  throw std::runtime_error("front_position: no front found");
}

}  // namespace vsw
