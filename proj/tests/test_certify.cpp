#include <doctest.h>
#include <racert/certify.hpp>
#include <racert/value.hpp>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace racert;
using fixtures::affine_system;
using fixtures::quadratic_constraint_system;

namespace {
Vec v1(double a) {
  Vec v(1);
  v[0] = a;
  return v;
}
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

const SystemModel& linear1d() {
  static SystemModel m = builtin_system("linear1d");
  return m;
}
}  // namespace

TEST_CASE("certificate composition over stages") {
  // t=0: min(-1, 3) = -1 ; t=1: min(0.5*2, min(3, 0.5*0.5)) = 0.25
  CHECK(compose_certificate({-1.0, 2.0}, {3.0, 0.5}, 0.5) == doctest::Approx(0.25));
  CHECK(compose_certificate({-1.0}, {-2.0}, 0.9) == doctest::Approx(-2.0));
}

TEST_CASE("zero tube collapses the certificate to the nominal measure") {
  SystemModel m = linear1d();
  m.disturbance_set = BoundedSet::box(v1(0), v1(0));
  m.eps_d = 0.0;
  Policy pol = Policy::constant(v1(-1.0));
  const int T = 20;
  const double gamma = 0.9;
  CertReport rep = certify_online(m, pol, v1(0.2), 0.0, T, gamma, CertMethod::both);

  Trajectory nominal;
  nominal.states = rep.tube.nominal_states;
  double expect = -std::numeric_limits<double>::infinity();
  for (int t = 0; t <= T; ++t)
    expect = std::max(expect, discounted_ra_measure(nominal, t, gamma, m));
  CHECK(*rep.lipschitz_value == doctest::Approx(expect).epsilon(1e-12));
  // surrogates are exact for linear1d, so the socp value collapses too
  CHECK(*rep.socp_value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("hand-evaluated certificate inside the target") {
  CertReport rep = lipschitz_certificate(linear1d(), Policy::constant(v1(0)),
                                         v1(-1.5), 0.1, 1, 0.9);
  CHECK(rep.lipschitz_bounds->reward_lb[0] == doctest::Approx(0.4));
  CHECK(rep.lipschitz_bounds->constraint_lb[0] == doctest::Approx(0.4));
  CHECK(*rep.lipschitz_value >= 0.4 - 1e-12);
  CHECK(rep.certified(CertMethod::lipschitz));
  CHECK(rep.certified_controls.size() == 1);
}

TEST_CASE("states beyond the controllable boundary never certify") {
  for (int T : {1, 5, 20, 60}) {
    CertReport rep = lipschitz_certificate(linear1d(), Policy::constant(v1(-1.0)),
                                           v1(3.0), 0.05, T, 0.9);
    CHECK(*rep.lipschitz_value <= 0.0);
    CHECK_FALSE(rep.certified(CertMethod::lipschitz));
  }
}

TEST_CASE("exact linear surrogates reproduce the Lipschitz stage bounds") {
  SystemModel m = affine_system();
  CounterRng rng(61);
  for (int i = 0; i < 25; ++i) {
    Vec x0 = oracles::random_vec(2, 0.5, rng);
    double eps = rng.uniform(0.0, 0.2);
    CertReport rep = certify_online(m, Policy::constant(v1(0.3)), x0, eps, 12,
                                    0.9, CertMethod::both);
    for (int t = 0; t <= 12; ++t) {
      CHECK(rep.socp_bounds->reward_lb[t] ==
            doctest::Approx(rep.lipschitz_bounds->reward_lb[t]).epsilon(1e-9));
      CHECK(rep.socp_bounds->constraint_lb[t] ==
            doctest::Approx(rep.lipschitz_bounds->constraint_lb[t]).epsilon(1e-9));
    }
    CHECK(*rep.socp_value == doctest::Approx(*rep.lipschitz_value).epsilon(1e-9));
  }
}

TEST_CASE("quadratic surrogate bounds are at least as tight as Lipschitz") {
  SystemModel m = quadratic_constraint_system(6.0);
  CounterRng rng(67);
  for (int i = 0; i < 100; ++i) {
    Vec x0 = oracles::random_vec(2, 0.8, rng);
    double eps = rng.uniform(0.0, 0.3);
    CertReport rep = certify_online(m, Policy::constant(v1(-0.2)), x0, eps, 10,
                                    0.9, CertMethod::both);
    for (int t = 0; t <= 10; ++t)
      CHECK(rep.socp_bounds->constraint_lb[t] >=
            rep.lipschitz_bounds->constraint_lb[t] - 1e-9);
  }
}

TEST_CASE("coupled offsets stay conservative against pointwise sampling") {
  SystemModel m = quadratic_constraint_system(6.0);
  CoupledOffset off;
  off.row = v2(0.0, 1.0);
  off.scale = 0.2;
  off.shift = 0.05;
  m.surrogate_constraint.quadratics[0].offset = off;
  CounterRng rng(71);
  for (int i = 0; i < 20; ++i) {
    Vec x0 = oracles::random_vec(2, 0.7, rng);
    CertReport rep =
        certify_online(m, Policy::constant(v1(0)), x0, 0.1, 6, 0.9, CertMethod::socp);
    const auto& quad = m.surrogate_constraint.quadratics[0];
    for (int t = 0; t <= 6; ++t) {
      double sampled = oracles::sampled_ball_min(
          [&](const Vec& x) {
            double base = 0.5 * x.dot(quad.Q * x) + quad.q.dot(x) + quad.b;
            return base - off.scale * std::max(off.row.dot(x) + off.shift, 0.0);
          },
          rep.tube.nominal_states[t], rep.tube.radii[t], 20000, rng.next_u64());
      CHECK(rep.socp_bounds->constraint_lb[t] <= sampled + 1e-9);
    }
  }
}

TEST_CASE("socp certification requires surrogate sets") {
  SystemModel m = linear1d();
  m.surrogate_target.halfspaces.clear();
  CHECK_THROWS_AS(
      socp_certificate(m, Policy::constant(v1(0)), v1(-1.5), 0.1, 5, 0.9),
      std::invalid_argument);
}

TEST_CASE("certificates are monotone in the horizon") {
  CounterRng rng(73);
  for (int i = 0; i < 20; ++i) {
    Vec x0 = v1(rng.uniform(-3.0, 1.0));
    double prev_l = -std::numeric_limits<double>::infinity();
    double prev_s = prev_l;
    for (int T : {5, 10, 20, 40}) {
      CertReport rep = certify_online(linear1d(), Policy::constant(v1(-1.0)), x0,
                                      0.05, T, 0.9, CertMethod::both);
      CHECK(*rep.lipschitz_value >= prev_l - 1e-12);
      CHECK(*rep.socp_value >= prev_s - 1e-12);
      prev_l = *rep.lipschitz_value;
      prev_s = *rep.socp_value;
    }
  }
}

TEST_CASE("offline certification of a single point") {
  CertifiedSet set =
      certify_offline(linear1d(), Policy::constant(v1(0)), v1(-1.5), v1(-1.5),
                      0.05, 5, 0.9, CertMethod::both);
  CHECK(set.centers_examined == 1);
  CHECK(set.members.size() == 1);
}

TEST_CASE("offline lattice covers the region with certified balls") {
  CertifiedSet set =
      certify_offline(linear1d(), Policy::constant(v1(0)), v1(-1.7), v1(-1.2),
                      0.05, 5, 0.9, CertMethod::lipschitz);
  CHECK(set.members.size() == set.centers_examined);  // everything certifies here
  CounterRng rng(79);
  for (int i = 0; i < 1000; ++i) CHECK(set.covers(v1(rng.uniform(-1.7, -1.2))));
}

TEST_CASE("certified balls lie inside the grid super-zero set") {
  auto model = std::make_shared<SystemModel>(linear1d());
  auto lattice = ActionLattice::build(*model, 21, 11);
  auto field = std::make_shared<ValueField>(
      value_iteration(*model, Grid({{-4.0, 4.0, 801}}), 0.9, lattice));
  Policy greedy = Policy::grid_greedy(field, model, lattice);
  CertifiedSet set = certify_offline(*model, greedy, v1(-1.8), v1(0.2), 0.05, 60,
                                     0.9, CertMethod::both);
  REQUIRE_FALSE(set.members.empty());
  CounterRng rng(83);
  for (const auto& member : set.members) {
    auto ball = BoundedSet::ball(member.center, set.eps_x);
    for (int s = 0; s < 100; ++s) {
      Vec x = ball.sample(rng);
      CHECK(field->interpolate(x) > 0.0);
      CHECK(x[0] > -2.0);
      CHECK(x[0] < 0.5);
    }
  }
}

TEST_CASE("offline certification with method both equals the union") {
  auto pol = Policy::constant(v1(0));
  auto lip = certify_offline(linear1d(), pol, v1(-1.8), v1(-0.9), 0.05, 10, 0.9,
                             CertMethod::lipschitz);
  auto socp = certify_offline(linear1d(), pol, v1(-1.8), v1(-0.9), 0.05, 10, 0.9,
                              CertMethod::socp);
  auto both = certify_offline(linear1d(), pol, v1(-1.8), v1(-0.9), 0.05, 10, 0.9,
                              CertMethod::both);
  std::set<double> union_centers, both_centers;
  for (const auto& r : lip.members) union_centers.insert(r.center[0]);
  for (const auto& r : socp.members) union_centers.insert(r.center[0]);
  for (const auto& r : both.members) both_centers.insert(r.center[0]);
  CHECK(union_centers == both_centers);
}

TEST_CASE("offline lattice budget overflow reports the required size") {
  CHECK_THROWS_WITH_AS(
      certify_offline(linear1d(), Policy::constant(v1(0)), v1(-4), v1(4), 0.001,
                      5, 0.9, CertMethod::lipschitz, 100),
      doctest::Contains("exceeds budget"), std::invalid_argument);
}

TEST_CASE("threaded offline certification matches single-threaded") {
  auto pol = Policy::constant(v1(0));
  auto a = certify_offline(linear1d(), pol, v1(-1.8), v1(-1.0), 0.05, 5, 0.9,
                           CertMethod::both, 1000000, 1);
  auto b = certify_offline(linear1d(), pol, v1(-1.8), v1(-1.0), 0.05, 5, 0.9,
                           CertMethod::both, 1000000, 4);
  REQUIRE(a.members.size() == b.members.size());
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    CHECK(a.members[i].center[0] == b.members[i].center[0]);
    CHECK(*a.members[i].lipschitz_value == *b.members[i].lipschitz_value);
  }
}
