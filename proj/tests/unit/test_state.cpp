#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "random_states.hpp"
#include "vsw/state.hpp"

using namespace vsw;

namespace {

PrimitiveState<double> make(double h, double u, double v, double cxx, double cyy, double cxy, double czz) {
  return {h, u, v, cxx, cyy, cxy, czz};
}

}  // namespace

TEST(State, ToConservedExamples) {
  ConservedState<double> expected;
  expected << 1, 0, 0, 1, 1, 0, 1;
  EXPECT_EQ(primitive_to_conserved(PrimitiveState<double>::rest(1.0)), expected);

  expected << 3, 0, 0, 3, 3, 0, 3;
  EXPECT_EQ(primitive_to_conserved(PrimitiveState<double>::rest(3.0)), expected);

  expected << 2, 2, -2, 8, 2, 1, 4;
  EXPECT_EQ(primitive_to_conserved(make(2, 1, -1, 4, 1, 1, 2)), expected);
}

TEST(State, ToPrimitiveExamples) {
  ConservedState<double> q;
  q << 2, 2, -2, 8, 2, 1, 4;
  EXPECT_EQ(conserved_to_primitive(q), make(2, 1, -1, 4, 1, 1, 2));
  q << 3, 0, 0, 3, 3, 0, 3;
  EXPECT_EQ(conserved_to_primitive(q), PrimitiveState<double>::rest(3.0));
}

TEST(State, InadmissibleInputsThrow) {
  EXPECT_THROW(primitive_to_conserved(make(0, 0, 0, 1, 1, 0, 1)), InadmissibleState);
  EXPECT_THROW(primitive_to_conserved(make(1, 0, 0, 1, 1, 1, 1)), InadmissibleState);
  EXPECT_THROW(primitive_to_conserved(make(1, 0, 0, 1, 1, 0, -1)), InadmissibleState);
  ConservedState<double> q;
  q << 1, 0, 0, 1, 1, 1, 1;
  EXPECT_THROW(conserved_to_primitive(q), InadmissibleState);
  EXPECT_THROW(free_energy(make(1, 0, 0, 1e-320, 1, 0, 1), PhysParams<double>{}), InadmissibleState);
}

TEST(State, CheckAdmissibleReportsViolations) {
  ConservedState<double> q;
  q << 1, 0, 0, 1, 1, 0, 1;
  EXPECT_TRUE(check_admissible(q).admissible());

  q << 1, 0, 0, -1, 1, 0, 1;
  auto rep = check_admissible(q);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.violations[0].inequality, "q4>0");
  EXPECT_EQ(rep.violations[0].margin, -1.0);

  q << 1, 0, 0, 1, 1, 1.5, 1;
  rep = check_admissible(q);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.violations[0].inequality, "|q6|<q1");
  EXPECT_DOUBLE_EQ(rep.violations[0].margin, -0.5);

  q << -1, 0, 0, -1, -1, 2, -1;
  EXPECT_EQ(check_admissible(q).violations.size(), 5u);
}

TEST(State, FreeEnergyExamples) {
  PhysParams<double> prm;
  EXPECT_DOUBLE_EQ(free_energy(PrimitiveState<double>::rest(1.0), prm), 5.0);
  EXPECT_DOUBLE_EQ(free_energy(PrimitiveState<double>::rest(3.0), prm), 15.0);
  EXPECT_NEAR(free_energy(make(1, 0, 0, 2, 1, 0, 1), prm), 6.534264097200273, 1e-14);
}

TEST(State, EnergySplitExamples) {
  PhysParams<double> prm;
  auto e = energy_split(PrimitiveState<double>::rest(1.0), prm);
  EXPECT_DOUBLE_EQ(e.e_par, 5.0);
  EXPECT_DOUBLE_EQ(e.e_perp, 0.0);
  e = energy_split(make(1, 0, 0, 2, 1, 0, 1), prm);
  EXPECT_NEAR(e.e_par, 10 - 5 * std::log(2.0), 1e-14);
  EXPECT_NEAR(e.e_par, 6.534264097200273, 1e-14);
  EXPECT_DOUBLE_EQ(e.e_perp, 0.0);
}

TEST(StateProperty, RoundTripIsIdentity) {
  std::mt19937_64 rng(1);
  double worst = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto p = testing_support::random_state(rng);
    const auto back = conserved_to_primitive(primitive_to_conserved(p));
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    worst = std::max({worst, rel(back.h, p.h), rel(back.u, p.u), rel(back.v, p.v), rel(back.cxx, p.cxx),
                      rel(back.cyy, p.cyy), rel(back.cxy, p.cxy), rel(back.czz, p.czz)});
  }
  EXPECT_LE(worst, 1e-14);
}

TEST(StateProperty, AdmissibleSetIsConvex) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> theta(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const auto qa = primitive_to_conserved(testing_support::random_state(rng));
    const auto qb = primitive_to_conserved(testing_support::random_state(rng));
    const double t = theta(rng);
    const ConservedState<double> qc = t * qa + (1 - t) * qb;
    ASSERT_TRUE(check_admissible(qc).admissible());
  }
}

TEST(StateProperty, EntropyIsConvexInConservedVariables) {
  std::mt19937_64 rng(3);
  PhysParams<double> prm;
  for (int i = 0; i < 10000; ++i) {
    const auto qa = primitive_to_conserved(testing_support::random_state(rng));
    const auto qb = primitive_to_conserved(testing_support::random_state(rng));
    const ConservedState<double> mid = (qa + qb) / 2;
    const double sa = entropy(qa, prm), sb = entropy(qb, prm), sm = entropy(mid, prm);
    const double scale = std::max({std::abs(sa), std::abs(sb), std::abs(sm)});
    ASSERT_LE(sm, (sa + sb) / 2 + 1e-12 * scale);
  }
}

TEST(StateProperty, EnergySplitMatchesFreeEnergy) {
  std::mt19937_64 rng(4);
  PhysParams<double> prm{9.81, 3.0, 1.0, 0.0, 0.0};
  for (int i = 0; i < 10000; ++i) {
    const auto p = testing_support::random_state(rng);
    const auto e = energy_split(p, prm);
    const double total = (p.u * p.u + p.v * p.v) / 2 + e.e_par + e.e_perp;
    const double ref = free_energy(p, prm);
    ASSERT_NEAR(total, ref, 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(State, PhysParamsValidation) {
  EXPECT_NO_THROW((PhysParams<double>{}.validate()));
  EXPECT_THROW((PhysParams<double>{-1, 1, 1, 0, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((PhysParams<double>{10, -1, 1, 0, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((PhysParams<double>{10, 1, 0, 0, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((PhysParams<double>{10, 1, 1, -1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((PhysParams<double>{10, 1, 1, 0, -1}.validate()), std::invalid_argument);
}
