#include "vsw/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vsw/diagnostics.hpp"
#include "vsw/exact_sum.hpp"

namespace vsw {

Vector2<double> Mesh::face_center(int i, int j, Edge e) const {
  const auto c = center(i, j);
  switch (e) {
    case Edge::kWest: return {c.x() - dx / 2, c.y()};
    case Edge::kEast: return {c.x() + dx / 2, c.y()};
    case Edge::kSouth: return {c.x(), c.y() - dy / 2};
    case Edge::kNorth: return {c.x(), c.y() + dy / 2};
  }
  return c;
}

Mesh build_cartesian_mesh(int nx, int ny, double lx, double ly) {
  if (nx < 1 || ny < 1) throw BadDimensions("mesh needs nx, ny >= 1");
  if (!(lx > 0) || !(ly > 0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw BadDimensions("mesh needs Lx, Ly > 0");
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.lx = lx;
  m.ly = ly;
  m.dx = lx / nx;
  m.dy = ly / ny;
  return m;
}

const char* to_string(BoundaryCondition::Kind k) {
  switch (k) {
    case BoundaryCondition::Kind::TranslationInvariant: return "translation";
    case BoundaryCondition::Kind::SlipWall: return "slip";
    case BoundaryCondition::Kind::NoSlipWall: return "noslip";
    case BoundaryCondition::Kind::Outflow: return "outflow";
  }
  return "?";
}

Vector2<double> wall_velocity_at(const BoundaryCondition& bc, double s) {
  if (!bc.regularized) return bc.wall_velocity;
  const double w = 16 * s * s * (1 - s) * (1 - s);
  return w * bc.wall_velocity;
}

PrimitiveState<double> ghost_local(const PrimitiveState<double>& in, const BoundaryCondition& bc,
                                   const Vector2<double>& n, const Vector2<double>& wall_velocity) {
  using Kind = BoundaryCondition::Kind;
  PrimitiveState<double> g = in;
  switch (bc.kind) {
    case Kind::SlipWall:
      g.u = -in.u;
      g.cxy = -in.cxy;
      break;
    case Kind::NoSlipWall: {
      // Wall velocity is tangential: U_ghost = 2 w - U.
      const double wt = -n.y() * wall_velocity.x() + n.x() * wall_velocity.y();
      g.u = -in.u;
      g.v = 2 * wt - in.v;
      g.cxy = -in.cxy;
      break;
    }
    case Kind::Outflow:
    case Kind::TranslationInvariant:
      break;
  }
  return g;
}

ConservedState<double> ghost_state(const ConservedState<double>& interior, const BoundaryCondition& bc,
                                   const Vector2<double>& n, double s) {
  const auto local = to_local_frame(interior, n);
  return from_local_frame(ghost_local(local, bc, n, wall_velocity_at(bc, s)), n);
}

double FaceSweep::max_speed() const {
  double s = 0;
  for (double x : smax) s = std::max(s, x);
  return s;
}

namespace {

// Interior cell whose state a translation-invariant ghost copies.
std::array<int, 2> translated_source(const Mesh& mesh, int gi, int gj, Edge e, const std::array<int, 2>& d) {
  const auto n = outward_normal(e);
  // Shift towards the interior.
  int sign = 1;
  const double inward = -(n.x() * d[0] + n.y() * d[1]);
  if (inward < 0) sign = -1;
  int si = gi + sign * d[0];
  int sj = gj + sign * d[1];
  if (inward == 0) {
    si = gi - static_cast<int>(n.x());
    sj = gj - static_cast<int>(n.y());
  }
  si = std::clamp(si, 0, mesh.nx - 1);
  sj = std::clamp(sj, 0, mesh.ny - 1);
  return {si, sj};
}

std::array<int, 2> step_of(Edge e) {
  switch (e) {
    case Edge::kWest: return {-1, 0};
    case Edge::kEast: return {1, 0};
    case Edge::kSouth: return {0, -1};
    case Edge::kNorth: return {0, 1};
  }
  return {0, 0};
}

}  // namespace

FaceSweep sweep_faces(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc,
                      const PhysParams<double>& params, ModelKind model, const SelectOptions& opt) {
  const int n_cells = mesh.cells();
  if (static_cast<int>(state.q.size()) != n_cells) throw BadDimensions("field size does not match mesh");
  std::vector<PrimitiveState<double>> prim(n_cells);
  for (int c = 0; c < n_cells; ++c) prim[c] = conserved_to_primitive(state.q[c]);

  FaceSweep sw;
  sw.delta.resize(n_cells);
  sw.smax.assign(n_cells, 0.0);
  sw.entropy_flux.assign(n_cells, 0.0);
  sw.entropy_flux_abs.assign(n_cells, 0.0);
  sw.all_ok.assign(n_cells, 1);
  ExactSum b_mass, b_momx, b_momy, b_entropy;

  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const int c = mesh.index(i, j);
      ExactSum g_sum, g_abs;
      for (Edge e : kEdges) {
        const Vector2<double> n = outward_normal(e);
        const auto st = step_of(e);
        const int ni = i + st[0], nj = j + st[1];
        LocalPair<double> pair;
        pair.normal = n;
        pair.left = rotate_to_local(prim[c], n);
        const bool boundary = !mesh.inside(ni, nj);
        if (!boundary) {
          pair.right = rotate_to_local(prim[mesh.index(ni, nj)], n);
        } else {
          const auto& b = bc.at(e);
          if (b.kind == BoundaryCondition::Kind::TranslationInvariant) {
            const auto src = translated_source(mesh, ni, nj, e, b.shift);
            pair.right = rotate_to_local(prim[mesh.index(src[0], src[1])], n);
          } else {
            const auto fc = mesh.face_center(i, j, e);
            const double s = (e == Edge::kWest || e == Edge::kEast) ? fc.y() / mesh.ly : fc.x() / mesh.lx;
            pair.right = ghost_local(pair.left, b, n, wall_velocity_at(b, s));
          }
        }

        const auto sel = select_and_solve(pair, params, model, opt);
        const auto up = interface_update(sel.fan, n);
        const int k = static_cast<int>(e);
        sw.delta[c][k] = up.delta_left;
        sw.smax[c] = std::max(sw.smax[c], up.smax);
        const double w = mesh.face_length(e) / mesh.area();
        g_sum.add(w * up.entropy_flux);
        g_abs.add(w * std::abs(up.entropy_flux));

        ++sw.faces;
        const bool ok = sel.report.all_hold();
        if (!ok) {
          ++sw.failed_faces;
          sw.all_ok[c] = 0;
        }
        sw.decoupled_sides += sel.params.decoupled[kLeft] + sel.params.decoupled[kRight];
        sw.escalations += sel.params.escalations;
        ++sw.r_histogram[std::min(sel.params.r_iterations, kIterationBins - 1)];

        if (boundary) {
          const double len = mesh.face_length(e);
          b_mass.add(len * up.flux[0]);
          b_momx.add(len * up.flux[1]);
          b_momy.add(len * up.flux[2]);
          b_entropy.add(len * up.entropy_flux);
        }
      }
      sw.entropy_flux[c] = g_sum.value();
      sw.entropy_flux_abs[c] = g_abs.value();
    }
  }
  sw.boundary_mass = b_mass.value();
  sw.boundary_momentum = {b_momx.value(), b_momy.value()};
  sw.boundary_entropy = b_entropy.value();
  return sw;
}

double timestep_from_sweep(const FaceSweep& sweep, const Mesh& mesh, const PhysParams<double>& params,
                           double cfl) {
  if (!(cfl > 0) || cfl > 1) throw std::invalid_argument("cfl must lie in (0, 1]");
  const double s = sweep.max_speed();
  double tau = std::numeric_limits<double>::infinity();
  if (s > 0) tau = cfl / (mesh.perimeter_ratio() * s);
  if (params.nu_s > 0) {
    const double h = std::min(mesh.dx, mesh.dy);
    tau = std::min(tau, cfl * h * h / (8 * params.nu_s));
  }
  return tau;
}

double compute_timestep(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc,
                        const PhysParams<double>& params, ModelKind model, double cfl) {
  return timestep_from_sweep(sweep_faces(state, mesh, bc, params, model), mesh, params, cfl);
}

FieldState apply_sweep(const FieldState& state, const FaceSweep& sweep, const Mesh& mesh, double tau) {
  const double limit = 1 / (mesh.perimeter_ratio() * sweep.max_speed());
  if (tau > limit) {
    std::ostringstream msg;
    msg << "time step " << tau << " exceeds the CFL bound " << limit;
    throw CflViolated(msg.str());
  }
  FieldState out;
  out.q.resize(state.q.size());
  out.t = state.t + tau;
  out.step = state.step + 1;
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const int c = mesh.index(i, j);
      for (int k = 0; k < 7; ++k) {
        ExactSum s;
        s.add(state.q[c][k]);
        for (Edge e : kEdges) {
          const double w = tau * mesh.face_length(e) / mesh.area();
          s.add(w * sweep.delta[c][static_cast<int>(e)][k]);
        }
        out.q[c][k] = s.value();
      }
    }
  }
  return out;
}

namespace {

void require_field_admissible(const FieldState& s, const char* stage, StepDiagnostics* diag) {
  const auto a = check_field(s);
  if (diag) {
    diag->admissibility_violations += a.violations;
    diag->worst_margin = std::min(diag->worst_margin, a.worst_margin);
  }
  if (a.violations > 0) {
    std::ostringstream msg;
    msg << stage << " produced " << a.violations << " inadmissible cell values (worst margin " << a.worst_margin
        << ")";
    throw InadmissibleResult(msg.str());
  }
}

void record_sweep(const FaceSweep& sw, double tau, StepDiagnostics* d) {
  if (!d) return;
  d->tau = tau;
  d->boundary_mass = tau * sw.boundary_mass;
  d->boundary_momentum = tau * sw.boundary_momentum;
  d->boundary_entropy = tau * sw.boundary_entropy;
  d->faces = sw.faces;
  d->failed_faces = sw.failed_faces;
  d->decoupled_sides = sw.decoupled_sides;
  d->escalations = sw.escalations;
  d->r_histogram = sw.r_histogram;
}

}  // namespace

FieldState hyperbolic_step(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc, double tau,
                           const PhysParams<double>& params, ModelKind model, StepDiagnostics* diag,
                           const SelectOptions& opt) {
  const auto sw = sweep_faces(state, mesh, bc, params, model, opt);
  auto out = apply_sweep(state, sw, mesh, tau);
  record_sweep(sw, tau, diag);
  require_field_admissible(out, "hyperbolic step", diag);
  return out;
}

FieldState source_step(const FieldState& state, double tau, const PhysParams<double>& params) {
  FieldState out = state;
  for (auto& q : out.q) q = primitive_to_conserved(relax_source_step(conserved_to_primitive(q), tau, params));
  return out;
}

FieldState viscous_step(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc, double tau,
                        double nu_s) {
  if (nu_s == 0) return state;
  const double hmin = std::min(mesh.dx, mesh.dy);
  if (tau > hmin * hmin / (8 * nu_s) * (1 + 1e-12)) throw DiffusionCflViolated("viscous step too large");
  const int n_cells = mesh.cells();
  std::vector<PrimitiveState<double>> prim(n_cells);
  for (int c = 0; c < n_cells; ++c) prim[c] = conserved_to_primitive(state.q[c]);

  FieldState out = state;
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const int c = mesh.index(i, j);
      const auto& p = prim[c];
      ExactSum fx, fy;
      for (Edge e : kEdges) {
        const auto st = step_of(e);
        const int ni = i + st[0], nj = j + st[1];
        PrimitiveState<double> nb;
        if (mesh.inside(ni, nj)) {
          nb = prim[mesh.index(ni, nj)];
        } else {
          const auto& b = bc.at(e);
          if (b.kind == BoundaryCondition::Kind::TranslationInvariant) {
            const auto src = translated_source(mesh, ni, nj, e, b.shift);
            nb = prim[mesh.index(src[0], src[1])];
          } else {
            const auto n = outward_normal(e);
            const auto fc = mesh.face_center(i, j, e);
            const double s = (e == Edge::kWest || e == Edge::kEast) ? fc.y() / mesh.ly : fc.x() / mesh.lx;
            nb = rotate_from_local(ghost_local(rotate_to_local(p, n), b, n, wall_velocity_at(b, s)), n);
          }
        }
        const double d = (e == Edge::kWest || e == Edge::kEast) ? mesh.dx : mesh.dy;
        const double w = nu_s * (p.h + nb.h) / 2 / (d * d);
        fx.add(w * (nb.u - p.u));
        fy.add(w * (nb.v - p.v));
      }
      out.q[c][1] = state.q[c][1] + tau * fx.value();
      out.q[c][2] = state.q[c][2] + tau * fy.value();
    }
  }
  return out;
}

StepResult advance(const FieldState& state, const Mesh& mesh, const BoundarySpec& bc,
                   const PhysParams<double>& params, ModelKind model, const EngineOptions& opt, double max_tau) {
  StepResult r;
  auto& d = r.diag;
  const auto sw = sweep_faces(state, mesh, bc, params, model, opt.select);
  r.tau = std::min(timestep_from_sweep(sw, mesh, params, opt.cfl), max_tau);
  if (!(r.tau > 0) || !std::isfinite(r.tau)) throw CflViolated("no admissible positive time step");

  auto hyp = apply_sweep(state, sw, mesh, r.tau);
  record_sweep(sw, r.tau, &d);
  require_field_admissible(hyp, "hyperbolic step", &d);

  auto src = source_step(hyp, r.tau, params);
  require_field_admissible(src, "source step", &d);

  const auto budget = entropy_budget(state, src, sw.entropy_flux, sw.entropy_flux_abs, r.tau, params);
  d.max_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < src.q.size(); ++c) {
    if (!sw.all_ok[c]) continue;
    ++d.audited_cells;
    d.max_residual = std::max(d.max_residual, budget.residual[c] / budget.scale[c]);
  }
  if (d.audited_cells == 0) d.max_residual = 0;

  if (params.nu_s > 0) {
    const double s_before = totals(src, mesh, params).entropy;
    src = viscous_step(src, mesh, bc, r.tau, params.nu_s);
    require_field_admissible(src, "viscous step", &d);
    d.viscous_work = totals(src, mesh, params).entropy - s_before;
  }

  r.state = std::move(src);
  r.state.t = state.t + r.tau;
  r.state.step = state.step + 1;
  const auto tot = totals(r.state, mesh, params);
  d.step = r.state.step;
  d.t = r.state.t;
  d.mass = tot.mass;
  d.momentum = tot.momentum;
  d.entropy = tot.entropy;
  return r;
}

}  // namespace vsw
