#pragma once

#include <array>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vsw/riemann.hpp"

namespace vsw {

class BadDimensions : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CflViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DiffusionCflViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InadmissibleResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------------------------
// Mesh

enum class Edge { kWest = 0, kEast = 1, kSouth = 2, kNorth = 3 };

inline constexpr std::array<Edge, 4> kEdges{Edge::kWest, Edge::kEast, Edge::kSouth, Edge::kNorth};

inline Vector2<double> outward_normal(Edge e) {
  switch (e) {
    case Edge::kWest: return {-1.0, 0.0};
    case Edge::kEast: return {1.0, 0.0};
    case Edge::kSouth: return {0.0, -1.0};
    case Edge::kNorth: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

/// Uniform Cartesian grid on [0, lx] x [0, ly]; cells stored row-major, index = j * nx + i.
struct Mesh {
  int nx = 1;
  int ny = 1;
  double lx = 1;
  double ly = 1;
  double dx = 1;
  double dy = 1;

  int cells() const { return nx * ny; }
  int index(int i, int j) const { return j * nx + i; }
  bool inside(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
  Vector2<double> center(int i, int j) const { return {(i + 0.5) * dx, (j + 0.5) * dy}; }
  double area() const { return dx * dy; }
  double face_length(Edge e) const { return e == Edge::kWest || e == Edge::kEast ? dy : dx; }
  // sum_j |Gamma_ij| / |V_i|
  double perimeter_ratio() const { return 2 / dx + 2 / dy; }
  Vector2<double> face_center(int i, int j, Edge e) const;
  int interior_faces() const { return (nx - 1) * ny + nx * (ny - 1); }
  int boundary_faces() const { return 2 * (nx + ny); }
};

Mesh build_cartesian_mesh(int nx, int ny, double lx, double ly);

// ---------------------------------------------------------------------------------------------
// Boundary conditions

struct BoundaryCondition {
  enum class Kind { TranslationInvariant, SlipWall, NoSlipWall, Outflow };
  Kind kind = Kind::Outflow;
  std::array<int, 2> shift{0, 1};              // invariance direction in cell units
  Vector2<double> wall_velocity{0.0, 0.0};     // no-slip wall velocity
  bool regularized = false;                    // scale the wall velocity by 16 s^2 (1 - s)^2

  static BoundaryCondition translation_invariant(int di, int dj) {
    BoundaryCondition b;
    b.kind = Kind::TranslationInvariant;
    b.shift = {di, dj};
    return b;
  }
  static BoundaryCondition slip_wall() {
    BoundaryCondition b;
    b.kind = Kind::SlipWall;
    return b;
  }
  static BoundaryCondition no_slip_wall(Vector2<double> w = {0.0, 0.0}, bool regularized = false) {
    BoundaryCondition b;
    b.kind = Kind::NoSlipWall;
    b.wall_velocity = w;
    b.regularized = regularized;
    return b;
  }
  static BoundaryCondition outflow() { return BoundaryCondition{}; }

  bool operator==(const BoundaryCondition&) const = default;
};

const char* to_string(BoundaryCondition::Kind k);

/// Conditions on the west, east, south and north edges.
struct BoundarySpec {
  std::array<BoundaryCondition, 4> edge{};
  const BoundaryCondition& at(Edge e) const { return edge[static_cast<int>(e)]; }
  BoundaryCondition& at(Edge e) { return edge[static_cast<int>(e)]; }
  static BoundarySpec all(const BoundaryCondition& b) { return BoundarySpec{{b, b, b, b}}; }
};

/// Wall velocity seen at a boundary point; s is the coordinate along the edge scaled to [0, 1].
Vector2<double> wall_velocity_at(const BoundaryCondition& bc, double s);

/// Ghost state in the frame of the outward normal (u normal, v tangential).
/// Not defined for TranslationInvariant, which needs the neighbouring cells.
PrimitiveState<double> ghost_local(const PrimitiveState<double>& interior_local, const BoundaryCondition& bc,
                                   const Vector2<double>& n, const Vector2<double>& wall_velocity);

/// Ghost state of a wall or outflow boundary, global frame.
ConservedState<double> ghost_state(const ConservedState<double>& interior, const BoundaryCondition& bc,
                                   const Vector2<double>& n, double s = 0.5);

// ---------------------------------------------------------------------------------------------
// Fields and steps

struct FieldState {
  std::vector<ConservedState<double>> q;
  double t = 0;
  long step = 0;
};

template <typename Fn>
FieldState sample_field(const Mesh& mesh, Fn&& ic) {
  FieldState s;
  s.q.resize(mesh.cells());
  for (int j = 0; j < mesh.ny; ++j)
    for (int i = 0; i < mesh.nx; ++i) {
      const auto c = mesh.center(i, j);
      s.q[mesh.index(i, j)] = primitive_to_conserved(ic(c.x(), c.y()));
    }
  return s;
}

struct EngineOptions {
  double cfl = 0.9;
  SelectOptions select{};
};

inline constexpr int kIterationBins = 8;

/// Result of solving every face of every cell from that cell's side.
struct FaceSweep {
  std::vector<std::array<ConservedState<double>, 4>> delta;  // per cell, per edge (unit-time increments)
  std::vector<double> smax;                                   // per cell, max |xi| over its faces
  std::vector<double> entropy_flux;                           // per cell, sum_j |Gamma|/|V| G_ij
  std::vector<double> entropy_flux_abs;                       // per cell, sum_j |Gamma|/|V| |G_ij|
  std::vector<char> all_ok;                                   // per cell, every face passed its conditions
  // Boundary ledgers per unit time: integrals over the boundary of the outgoing fluxes.
  double boundary_mass = 0;
  Vector2<double> boundary_momentum{0.0, 0.0};
  double boundary_entropy = 0;
  long faces = 0;
  long failed_faces = 0;
  long decoupled_sides = 0;
  long escalations = 0;
  std::array<long, kIterationBins> r_histogram{};  // last bin collects >= kIterationBins - 1
  double max_speed() const;
};

FaceSweep sweep_faces(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc,
                      const PhysParams<double>& params, ModelKind model, const SelectOptions& opt = {});

/// tau = cfl * min_i 1 / (s_i sum_j |Gamma_ij|/|V_i|), also limited by the diffusion bound.
double timestep_from_sweep(const FaceSweep& sweep, const Mesh& mesh, const PhysParams<double>& params,
                           double cfl);

double compute_timestep(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc,
                        const PhysParams<double>& params, ModelKind model, double cfl = 0.9);

struct StepDiagnostics {
  long step = 0;
  double t = 0;
  double tau = 0;
  double mass = 0;
  Vector2<double> momentum{0.0, 0.0};
  double entropy = 0;
  // Outgoing boundary fluxes integrated over the step.
  double boundary_mass = 0;
  Vector2<double> boundary_momentum{0.0, 0.0};
  double boundary_entropy = 0;
  double max_residual = 0;   // max over audited cells of residual / scale
  long audited_cells = 0;    // cells whose faces all passed the entropy conditions
  long faces = 0;
  long failed_faces = 0;     // faces with a fail-soft parameter selection
  long decoupled_sides = 0;
  long escalations = 0;
  long admissibility_violations = 0;
  double worst_margin = 0;   // most negative admissibility margin, 0 if none
  std::array<long, kIterationBins> r_histogram{};
  double viscous_work = 0;   // entropy change of the viscous sub-step (excluded from the audit)
};

/// Applies q_i += tau sum_j |Gamma|/|V| delta_ij with exact per-cell summation.
FieldState apply_sweep(const FieldState& state, const FaceSweep& sweep, const Mesh& mesh, double tau);

FieldState hyperbolic_step(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc, double tau,
                           const PhysParams<double>& params, ModelKind model, StepDiagnostics* diag = nullptr,
                           const SelectOptions& opt = {});

FieldState source_step(const FieldState& state, double tau, const PhysParams<double>& params);

FieldState viscous_step(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc, double tau,
                        double nu_s);

struct StepResult {
  FieldState state;
  double tau = 0;
  StepDiagnostics diag;
};

/// One split step: hyperbolic, sources, then viscosity. `max_tau` clips the step (e.g. to hit t_end).
StepResult advance(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc,
                   const PhysParams<double>& params, ModelKind model, const EngineOptions& opt = {},
                   double max_tau = std::numeric_limits<double>::infinity());

}  // namespace vsw
