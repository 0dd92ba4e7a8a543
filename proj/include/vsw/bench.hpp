#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vsw/diagnostics.hpp"
#include "vsw/engine.hpp"

namespace vsw {

using InitialCondition = std::function<PrimitiveState<double>(double x, double y)>;

struct BenchmarkPreset {
  std::string name;
  InitialCondition ic;
  BoundarySpec bc;
  PhysParams<double> params;
  ModelKind model = ModelKind::SVTM;
  int nx = 33;
  int ny = 33;
  double lx = 1;
  double ly = 1;
  double t_end = 0.2;
};

/// Dam break across x + y = 1: depth 3 below the line, 1 on and above it, fluid at rest.
PrimitiveState<double> stoker_ic(double x, double y);

/// Column of depth 3 inside (x - 1/2)^2 + (y - 1/2)^2 < 0.2, depth 1 outside.
PrimitiveState<double> column_ic(double x, double y);

BenchmarkPreset stoker_preset(ModelKind model = ModelKind::SVUCM);
BenchmarkPreset column_preset(double G = 1, ModelKind model = ModelKind::SVTM);
BenchmarkPreset cavity_preset(double G = 0.1, double lambda = 1, double nu_s = 0.1, double g = 1000,
                              bool regularized_lid = false);

/// {G = .1, 1} x {lambda = .1, 1}
std::vector<BenchmarkPreset> cavity_sweep();

/// "stoker", "column" or "cavity"; throws std::invalid_argument otherwise.
BenchmarkPreset preset_by_name(const std::string& name);
std::vector<std::string> preset_names();

Mesh preset_mesh(const BenchmarkPreset& p);
FieldState preset_initial_state(const BenchmarkPreset& p, const Mesh& mesh);

struct RunHistory {
  FieldState state;
  std::vector<StepDiagnostics> steps;
  Totals initial;
};

/// Advances to t_end (the last step is clipped). `on_step` sees the state before each step and
/// the resulting step; it may be empty.
using StepObserver = std::function<void(const FieldState& before, const StepResult& step)>;
RunHistory run_until(FieldState state, const Mesh& mesh, const BoundarySpec& bc, const PhysParams<double>& params,
                     ModelKind model, double t_end, const EngineOptions& opt = {}, const StepObserver& on_step = {});

RunHistory run_preset(const BenchmarkPreset& p, const EngineOptions& opt = {}, const StepObserver& on_step = {});

/// 1D Riemann problem on an N x 1 strip of the given length, jump at its middle; lateral
/// boundaries translation invariant, ends outflow.
struct Strip {
  Mesh mesh;
  BoundarySpec bc;
  FieldState state;
};
Strip make_strip(const PrimitiveState<double>& left, const PrimitiveState<double>& right, int n, double length);

Profile reference_1d_solve(const PrimitiveState<double>& left, const PrimitiveState<double>& right, int n, double t_end,
                           const PhysParams<double>& params, ModelKind model, double length = 1.4142135623730951,
                           const EngineOptions& opt = {});

/// l1 norm over cells and components of next - prev.
double stationarity_metric(const FieldState& prev, const FieldState& next);

/// Classical Saint-Venant dam break over a wet bed: middle depth, velocity and shock speed.
struct DamBreakSolution {
  double h_mid = 0;
  double u_mid = 0;
  double shock_speed = 0;
};
DamBreakSolution classical_dam_break(double h_left, double h_right, double g);

/// Position of the downstream front: first cell, scanning from the right end, where h exceeds
/// the midpoint between h_right and the plateau value (linear interpolation between centres).
double front_position(const Profile& profile, double h_right, double h_plateau);

}  // namespace vsw
