#include <cmath>

#include <gtest/gtest.h>

#include "vsw/bench.hpp"
#include "vsw/diagnostics.hpp"
#include "vsw/engine.hpp"

using namespace vsw;

namespace {

using P = PrimitiveState<double>;
using V2 = Vector2<double>;

const PhysParams<double> kStokerParams{10, 10, 1, 0, 0};

// Quarter turn about the domain centre: cell (i, j) -> (n - 1 - j, i), vectors and tensors
// rotated. On q this is an exact permutation with sign flips.
ConservedState<double> rotate_quarter(const ConservedState<double>& q) {
  ConservedState<double> r;
  r << q[0], -q[2], q[1], q[4], q[3], -q[5], q[6];
  return r;
}

FieldState rotate_field(const FieldState& s, const Mesh& m) {
  FieldState r = s;
  for (int j = 0; j < m.ny; ++j)
    for (int i = 0; i < m.nx; ++i) r.q[m.index(m.nx - 1 - j, i)] = rotate_quarter(s.q[m.index(i, j)]);
  return r;
}

FieldState lumpy_field(const Mesh& m) {
  return sample_field(m, [](double x, double y) {
    P p;
    p.h = 1 + 0.5 * std::exp(-20 * ((x - 0.3) * (x - 0.3) + (y - 0.6) * (y - 0.6)));
    p.u = 0.3 * std::sin(3 * y + x);
    p.v = -0.2 * std::cos(2 * x - y);
    p.cxx = 1.2 + 0.3 * x;
    p.cyy = 0.9 + 0.2 * y * x;
    p.cxy = 0.1 * std::sin(5 * x * y);
    p.czz = 1.1 - 0.2 * y;
    return p;
  });
}

}  // namespace

TEST(Mesh, CartesianCounts) {
  const auto m = build_cartesian_mesh(33, 33, 1, 1);
  EXPECT_EQ(m.cells(), 1089);
  EXPECT_DOUBLE_EQ(m.dx, 1.0 / 33);
  EXPECT_EQ(m.interior_faces(), 2 * 32 * 33);
  EXPECT_EQ(m.boundary_faces(), 132);
  EXPECT_DOUBLE_EQ(m.perimeter_ratio(), 4 * 33.0);
  EXPECT_EQ(m.index(2, 1), 35);
  EXPECT_NEAR(m.center(0, 0).x(), 0.5 / 33, 1e-17);
}

TEST(Mesh, RejectsBadDimensions) {
  EXPECT_THROW(build_cartesian_mesh(0, 3, 1, 1), BadDimensions);
  EXPECT_THROW(build_cartesian_mesh(3, 3, -1, 1), BadDimensions);
}

TEST(Ghost, NoSlipLid) {
  const auto lid = BoundaryCondition::no_slip_wall({1.0, 0.0});
  P in = P::rest(1);
  in.u = 0.4;
  in.v = 0.1;
  in.cxy = 0.3;
  const auto g = conserved_to_primitive(ghost_state(primitive_to_conserved(in), lid, V2(0, 1)));
  EXPECT_NEAR(g.u, 1.6, 1e-15);
  EXPECT_NEAR(g.v, -0.1, 1e-15);
  EXPECT_NEAR(g.cxy, -0.3, 1e-15);
  EXPECT_EQ(g.h, 1.0);
}

TEST(Ghost, SlipWallReflects) {
  P in{2, 0.5, -0.25, 1.5, 0.8, 0.2, 1.1};
  const auto g = conserved_to_primitive(ghost_state(primitive_to_conserved(in), BoundaryCondition::slip_wall(), V2(1, 0)));
  EXPECT_DOUBLE_EQ(g.u, -0.5);
  EXPECT_DOUBLE_EQ(g.v, -0.25);
  EXPECT_DOUBLE_EQ(g.cxx, 1.5);
  EXPECT_DOUBLE_EQ(g.cyy, 0.8);
  EXPECT_NEAR(g.cxy, -0.2, 1e-16);
  EXPECT_DOUBLE_EQ(g.czz, 1.1);
}

TEST(Ghost, RegularizedLidProfile) {
  const auto lid = BoundaryCondition::no_slip_wall({1.0, 0.0}, true);
  EXPECT_DOUBLE_EQ(wall_velocity_at(lid, 0.5).x(), 1.0);
  EXPECT_DOUBLE_EQ(wall_velocity_at(lid, 0.0).x(), 0.0);
  EXPECT_DOUBLE_EQ(wall_velocity_at(lid, 0.25).x(), 16 * 0.0625 * 0.5625);
}

TEST(Timestep, RestStateBound) {
  const auto m = build_cartesian_mesh(33, 33, 1, 1);
  const auto s = sample_field(m, [](double, double) { return P::rest(1); });
  const auto bc = BoundarySpec::all(BoundaryCondition::slip_wall());
  const auto sw = sweep_faces(s, m, bc, kStokerParams, ModelKind::SVTM);
  // Every face is a trivial fan; the fastest wave is the selected c_par / h.
  EXPECT_GT(sw.max_speed(), std::sqrt(kStokerParams.g));
  EXPECT_DOUBLE_EQ(timestep_from_sweep(sw, m, kStokerParams, 0.9), 0.9 / (4 * 33 * sw.max_speed()));
}

TEST(Timestep, DiffusionBoundApplies) {
  const auto m = build_cartesian_mesh(32, 32, 1, 1);
  FaceSweep sw;
  sw.smax = {8.0};
  EXPECT_DOUBLE_EQ(timestep_from_sweep(sw, m, kStokerParams, 1.0), 1.0 / (4 * 32 * 8));
  PhysParams<double> viscous = kStokerParams;
  viscous.nu_s = 1;
  EXPECT_DOUBLE_EQ(timestep_from_sweep(sw, m, viscous, 1.0), 1.0 / (32.0 * 32 * 8));
  EXPECT_THROW(timestep_from_sweep(sw, m, kStokerParams, 1.5), std::invalid_argument);
}

TEST(Timestep, ApplyRejectsLargeStep) {
  const auto m = build_cartesian_mesh(8, 8, 1, 1);
  const auto s = preset_initial_state(stoker_preset(), m);
  const auto bc = stoker_preset().bc;
  const auto sw = sweep_faces(s, m, bc, kStokerParams, ModelKind::SVUCM);
  const double limit = timestep_from_sweep(sw, m, kStokerParams, 1.0);
  EXPECT_NO_THROW(apply_sweep(s, sw, m, limit));
  EXPECT_THROW(apply_sweep(s, sw, m, 1.01 * limit), CflViolated);
  EXPECT_THROW(viscous_step(s, m, bc, 1.0, 1.0), DiffusionCflViolated);
}

TEST(Engine, RestIsFixedPoint) {
  const auto m = build_cartesian_mesh(9, 9, 1, 1);
  FieldState s = sample_field(m, [](double, double) { return P::rest(2); });
  auto bc = BoundarySpec::all(BoundaryCondition::no_slip_wall());
  for (auto model : {ModelKind::SVTM, ModelKind::SVUCM}) {
    FieldState x = s;
    for (int k = 0; k < 5; ++k) x = advance(x, m, bc, {10, 1, 1, 0.5, 0.1}, model).state;
    for (int c = 0; c < m.cells(); ++c)
      for (int k = 0; k < 7; ++k) ASSERT_NEAR(x.q[c][k], s.q[c][k], 1e-13) << c << ' ' << k;
  }
}

TEST(Engine, UniformFlowIsPreserved) {
  const auto m = build_cartesian_mesh(7, 5, 1, 1);
  P p = P::rest(1.5);
  p.u = 0.3;
  p.v = -0.2;
  const auto s = sample_field(m, [&](double, double) { return p; });
  const auto bc = BoundarySpec::all(BoundaryCondition::outflow());
  FieldState x = s;
  for (int k = 0; k < 5; ++k) x = advance(x, m, bc, kStokerParams, ModelKind::SVTM).state;
  for (int c = 0; c < m.cells(); ++c)
    for (int k = 0; k < 7; ++k) ASSERT_NEAR(x.q[c][k], s.q[c][k], 1e-13);
}

TEST(Engine, StokerConservationLedger) {
  auto preset = stoker_preset();
  preset.nx = preset.ny = 17;
  for (auto model : {ModelKind::SVTM, ModelKind::SVUCM}) {
    preset.model = model;
    double out_mass = 0;
    V2 out_mom(0, 0);
    const auto run = run_preset(preset, {}, [&](const FieldState&, const StepResult& r) {
      out_mass += r.diag.boundary_mass;
      out_mom += r.diag.boundary_momentum;
    });
    const auto& last = run.steps.back();
    EXPECT_NEAR(last.mass + out_mass, run.initial.mass, 1e-12 * run.initial.mass);
    // No source acts on momentum when k = 0, so the boundary ledger closes it too.
    const double scale = run.initial.mass * std::sqrt(kStokerParams.g);
    EXPECT_NEAR(last.momentum.x() + out_mom.x(), 0.0, 1e-12 * scale);
    EXPECT_NEAR(last.momentum.y() + out_mom.y(), 0.0, 1e-12 * scale);
    for (const auto& d : run.steps) {
      ASSERT_EQ(d.admissibility_violations, 0);
      ASSERT_LE(d.max_residual, 1e-10);
    }
  }
}

TEST(Engine, SourceOnlyRelaxation) {
  const auto m = build_cartesian_mesh(2, 2, 1, 1);
  const P p{1, 0.5, 0, 3, 2, 0.5, 0.5};
  const auto s = sample_field(m, [&](double, double) { return p; });
  const PhysParams<double> params{10, 1, 0.5, 2, 0};
  const double tau = 0.1;
  const auto r = conserved_to_primitive(source_step(s, tau, params).q[0]);
  const double ratio = 1 / (1 + tau / params.lambda);
  EXPECT_NEAR(r.cxx - 1, ratio * (p.cxx - 1), 1e-15);
  EXPECT_NEAR(r.cyy - 1, ratio * (p.cyy - 1), 1e-15);
  EXPECT_NEAR(r.cxy, ratio * p.cxy, 1e-15);
  EXPECT_NEAR(r.czz - 1, ratio * (p.czz - 1), 1e-15);
  EXPECT_NEAR(r.u, p.u / (1 + tau * params.k), 1e-15);
}

TEST(Engine, ViscousSineDecay) {
  // u = sin(pi y) is an eigenvector of the discrete Laplacian with no-slip ghosts.
  const int n = 16;
  const auto m = build_cartesian_mesh(4, n, 1, 1);
  auto bc = BoundarySpec::all(BoundaryCondition::outflow());
  bc.at(Edge::kSouth) = BoundaryCondition::no_slip_wall();
  bc.at(Edge::kNorth) = BoundaryCondition::no_slip_wall();
  const auto s = sample_field(m, [](double, double y) {
    P p = P::rest(1);
    p.u = std::sin(M_PI * y);
    return p;
  });
  const double nu = 0.1, tau = 0.5 * m.dy * m.dy / (8 * nu);
  const auto r = viscous_step(s, m, bc, tau, nu);
  const double factor = 1 - tau * nu * 4 / (m.dy * m.dy) * std::pow(std::sin(M_PI * m.dy / 2), 2);
  for (int c = 0; c < m.cells(); ++c) {
    ASSERT_NEAR(r.q[c][1], factor * s.q[c][1], 1e-15);
    ASSERT_EQ(r.q[c][2], 0.0);
    ASSERT_EQ(r.q[c][0], s.q[c][0]);
  }
}

TEST(Engine, QuarterTurnEquivarianceIsBitwise) {
  const auto m = build_cartesian_mesh(12, 12, 1, 1);
  const auto bc = BoundarySpec::all(BoundaryCondition::outflow());
  const PhysParams<double> params{10, 2, 0.5, 0.1, 0.05};
  for (auto model : {ModelKind::SVTM, ModelKind::SVUCM}) {
    FieldState a = lumpy_field(m);
    FieldState b = rotate_field(a, m);
    for (int k = 0; k < 4; ++k) {
      auto ra = advance(a, m, bc, params, model);
      auto rb = advance(b, m, bc, params, model);
      ASSERT_EQ(ra.tau, rb.tau);
      a = std::move(ra.state);
      b = std::move(rb.state);
    }
    const auto expect = rotate_field(a, m);
    for (int c = 0; c < m.cells(); ++c)
      for (int k = 0; k < 7; ++k) ASSERT_EQ(b.q[c][k], expect.q[c][k]) << c << ' ' << k;
  }
}

TEST(Engine, ColumnStaysAdmissible) {
  auto preset = column_preset();
  preset.nx = preset.ny = 17;
  for (auto model : {ModelKind::SVTM, ModelKind::SVUCM}) {
    preset.model = model;
    const auto run = run_preset(preset);
    EXPECT_EQ(check_field(run.state).violations, 0);
    for (const auto& d : run.steps) ASSERT_EQ(d.admissibility_violations, 0);
    EXPECT_DOUBLE_EQ(run.state.t, preset.t_end);
  }
}
