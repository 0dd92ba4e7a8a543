#include <cmath>

#include <gtest/gtest.h>

#include "vsw/bench.hpp"

using namespace vsw;

namespace {

using P = PrimitiveState<double>;

}  // namespace

TEST(InitialConditions, Stoker) {
  EXPECT_EQ(stoker_ic(0.2, 0.3).h, 3.0);
  EXPECT_EQ(stoker_ic(0.5, 0.5).h, 1.0);  // on the dam line: shallow side
  EXPECT_EQ(stoker_ic(0.9, 0.9).h, 1.0);
  EXPECT_EQ(stoker_ic(0.2, 0.3), P::rest(3));
}

TEST(InitialConditions, Column) {
  EXPECT_EQ(column_ic(0.5, 0.5).h, 3.0);
  EXPECT_EQ(column_ic(0.5 + 0.44, 0.5).h, 3.0);  // 0.44^2 = 0.1936 < 0.2
  EXPECT_EQ(column_ic(0.5 + 0.45, 0.5).h, 1.0);
  EXPECT_EQ(column_ic(0.0, 0.0).h, 1.0);
}

TEST(Presets, Defaults) {
  const auto s = stoker_preset();
  EXPECT_EQ(s.model, ModelKind::SVUCM);
  EXPECT_DOUBLE_EQ(s.t_end, 0.2);
  EXPECT_EQ(s.nx, 33);
  EXPECT_DOUBLE_EQ(s.params.G, 10);

  const auto c = column_preset();
  EXPECT_DOUBLE_EQ(c.params.G, 1);
  EXPECT_EQ(c.bc.at(Edge::kWest).kind, BoundaryCondition::Kind::Outflow);

  const auto cav = cavity_preset();
  EXPECT_DOUBLE_EQ(cav.params.g, 1000);
  EXPECT_DOUBLE_EQ(cav.params.nu_s, 0.1);
  EXPECT_DOUBLE_EQ(cav.params.G, 0.1);
  EXPECT_DOUBLE_EQ(cav.t_end, 1);
  EXPECT_EQ(cav.bc.at(Edge::kNorth).wall_velocity, Vector2<double>(1, 0));
  EXPECT_FALSE(cav.bc.at(Edge::kNorth).regularized);
  for (Edge e : {Edge::kWest, Edge::kEast, Edge::kSouth}) {
    EXPECT_EQ(cav.bc.at(e).kind, BoundaryCondition::Kind::NoSlipWall);
    EXPECT_EQ(cav.bc.at(e).wall_velocity, Vector2<double>(0, 0));
  }
  EXPECT_EQ(cav.ic(0.3, 0.7), P::rest(1));
}

TEST(Presets, CavitySweep) {
  const auto sweep = cavity_sweep();
  ASSERT_EQ(sweep.size(), 4u);
  EXPECT_DOUBLE_EQ(sweep[0].params.G, 0.1);
  EXPECT_DOUBLE_EQ(sweep[0].params.lambda, 0.1);
  EXPECT_DOUBLE_EQ(sweep[3].params.G, 1);
  EXPECT_DOUBLE_EQ(sweep[3].params.lambda, 1);
}

TEST(Presets, ByName) {
  for (const auto& n : preset_names()) EXPECT_EQ(preset_by_name(n).name, n);
  EXPECT_THROW(preset_by_name("poiseuille"), std::invalid_argument);
}

TEST(RunUntil, LandsOnEndTime) {
  auto p = column_preset();
  p.nx = p.ny = 9;
  p.t_end = 0.013;
  int calls = 0;
  const auto run = run_preset(p, {}, [&](const FieldState& before, const StepResult& r) {
    ++calls;
    EXPECT_EQ(r.state.step, before.step + 1);
  });
  EXPECT_EQ(run.state.t, 0.013);
  EXPECT_EQ(calls, static_cast<int>(run.steps.size()));
  EXPECT_LE(run.steps.back().tau, run.steps.front().tau * 1.5);
}

TEST(Stationarity, Metric) {
  const auto m = build_cartesian_mesh(3, 3, 1, 1);
  const auto a = sample_field(m, [](double, double) { return P::rest(1); });
  EXPECT_EQ(stationarity_metric(a, a), 0.0);
  auto b = a;
  b.q[4][1] = 0.25;
  b.q[0][0] = 0.5;
  EXPECT_DOUBLE_EQ(stationarity_metric(a, b), 0.75);
  FieldState c;
  EXPECT_THROW(stationarity_metric(a, c), std::invalid_argument);
}

TEST(DamBreak, ClassicalSolution) {
  const auto s = classical_dam_break(3, 1, 10);
  EXPECT_NEAR(s.h_mid, 1.84858, 1e-5);
  EXPECT_NEAR(s.u_mid, 2.35544, 1e-5);
  EXPECT_NEAR(s.shock_speed, 5.13119, 1e-5);
  // Rankine-Hugoniot for mass and momentum across the shock.
  const double g = 10, hr = 1;
  EXPECT_NEAR(s.shock_speed * (s.h_mid - hr), s.h_mid * s.u_mid, 1e-12);
  EXPECT_NEAR(s.shock_speed * s.h_mid * s.u_mid,
              s.h_mid * s.u_mid * s.u_mid + g / 2 * (s.h_mid * s.h_mid - hr * hr), 1e-10);
  EXPECT_THROW(classical_dam_break(1, 3, 10), std::invalid_argument);
}

TEST(DamBreak, NewtonianLimitFrontSpeed) {
  // With G -> 0 the elastic waves disappear and the front follows the Saint-Venant shock.
  const PhysParams<double> params{10, 1e-10, 1, 0, 0};
  const double length = 3, t = 0.2;
  const auto prof = reference_1d_solve(P::rest(3), P::rest(1), 600, t, params, ModelKind::SVTM, length);
  const auto exact = classical_dam_break(3, 1, 10);
  const double front = front_position(prof, 1, exact.h_mid);
  EXPECT_NEAR((front - length / 2) / t, exact.shock_speed, 0.01 * exact.shock_speed);
}

TEST(Strip, Layout) {
  const auto s = make_strip(P::rest(3), P::rest(1), 10, 2);
  EXPECT_EQ(s.mesh.nx, 10);
  EXPECT_EQ(s.mesh.ny, 1);
  EXPECT_DOUBLE_EQ(s.mesh.dy, 0.2);
  EXPECT_EQ(conserved_to_primitive(s.state.q[4]).h, 3.0);
  EXPECT_EQ(conserved_to_primitive(s.state.q[5]).h, 1.0);
  EXPECT_EQ(s.bc.at(Edge::kEast).kind, BoundaryCondition::Kind::Outflow);
  EXPECT_EQ(s.bc.at(Edge::kNorth).kind, BoundaryCondition::Kind::TranslationInvariant);
}

TEST(FrontPosition, InterpolatesCrossing) {
  Profile p;
  for (int k = 0; k < 5; ++k) {
    ProfileRow r;
    r.s = k;
    r.p.h = k < 2 ? 2.0 : (k == 2 ? 1.5 : 1.0);
    p.push_back(r);
  }
  EXPECT_DOUBLE_EQ(front_position(p, 1, 2), 2.0);
  Profile flat(3);
  for (auto& r : flat) r.p.h = 1;
  EXPECT_THROW(front_position(flat, 1, 2), std::runtime_error);
}
