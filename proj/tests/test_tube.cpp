#include <doctest.h>
#include <racert/tube.hpp>
#include <racert/value.hpp>

#include "oracles.hpp"

using namespace racert;

namespace {
Vec v1(double a) {
  Vec v(1);
  v[0] = a;
  return v;
}

// Containment check of the tube radii: replay the nominal open-loop controls
// from perturbed starts under random admissible disturbances and verify the
// deviation never exceeds the stage radius.
void check_containment(const SystemModel& model, const Policy& policy,
                       const Vec& x0, double eps_x, int horizon, int replays,
                       std::uint64_t seed) {
  Tube tube = build_tube(model, policy, x0, eps_x, horizon);
  CounterRng root(CounterRng::mix(seed));
  auto start_ball = BoundedSet::ball(x0, eps_x);
  for (int r = 0; r < replays; ++r) {
    CounterRng rng = root.substream(r);
    Vec x = start_ball.sample(rng);
    for (int t = 0; t <= horizon; ++t) {
      CHECK((x - tube.nominal_states[t]).norm() <= tube.radii[t] + 1e-9);
      if (t == horizon) break;
      Vec d = model.disturbance_set.sample(rng);
      x = model.step(x, tube.nominal_controls[t], d);
    }
  }
}
}  // namespace

TEST_CASE("nominal rollout of the drifting benchmark") {
  auto m = builtin_system("linear1d");
  auto [states, controls] = nominal_rollout(m, Policy::constant(v1(0)), v1(1.0), 2);
  CHECK(states[1][0] == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(states[2][0] == doctest::Approx(1.0201).epsilon(1e-12));
  CHECK(controls.size() == 2);
}

TEST_CASE("single-step nominal rollout from inside the target") {
  auto m = builtin_system("linear1d");
  auto [states, controls] = nominal_rollout(m, Policy::constant(v1(0)), v1(-1.5), 1);
  CHECK(states.size() == 2);
  CHECK(controls.size() == 1);
}

TEST_CASE("greedy nominal rollout decreases toward the target") {
  auto model = std::make_shared<SystemModel>(builtin_system("linear1d"));
  auto lattice = ActionLattice::build(*model, 21, 11);
  auto field = std::make_shared<ValueField>(
      value_iteration(*model, Grid({{-4.0, 4.0, 401}}), 0.9, lattice));
  Policy greedy = Policy::grid_greedy(field, model, lattice);
  auto [states, controls] = nominal_rollout(*model, greedy, v1(0.4), 10);
  for (std::size_t t = 1; t < states.size(); ++t)
    CHECK(states[t][0] < states[t - 1][0]);
}

TEST_CASE("tube radius recursion on the benchmark") {
  auto m = builtin_system("linear1d");
  auto radii = lipschitz_tube_radii(m, 0.1, 3);
  CHECK(radii[0] == 0.1);
  CHECK(radii[1] == doctest::Approx(0.106).epsilon(1e-12));
}

TEST_CASE("zero uncertainty gives a zero tube") {
  auto m = builtin_system("linear1d");
  m.eps_d = 0.0;
  auto radii = lipschitz_tube_radii(m, 0.0, 10);
  for (double r : radii) CHECK(r == 0.0);
}

TEST_CASE("closed form agrees with the recursion") {
  for (const char* name : {"linear1d", "di2", "unicycle"}) {
    auto m = builtin_system(name);
    auto radii = lipschitz_tube_radii(m, 0.07, 50);
    for (int t = 0; t <= 50; ++t)
      CHECK(radii[t] ==
            doctest::Approx(lipschitz_tube_radius_closed_form(m, 0.07, t))
                .epsilon(1e-12));
  }
}

TEST_CASE("negative initial radius is rejected") {
  auto m = builtin_system("linear1d");
  CHECK_THROWS_AS(lipschitz_tube_radii(m, -0.1, 5), std::invalid_argument);
}

TEST_CASE("nominal rollout requires zero disturbance to be admissible") {
  auto m = builtin_system("linear1d");
  m.disturbance_set = BoundedSet::box(v1(0.1), v1(0.2));
  CHECK_THROWS_AS(nominal_rollout(m, Policy::constant(v1(0)), v1(0), 3),
                  std::invalid_argument);
}

TEST_CASE("disturbed replays stay inside the tube (linear1d)") {
  auto m = builtin_system("linear1d");
  check_containment(m, Policy::constant(v1(-0.5)), v1(0.0), 0.1, 30, 200, 13);
}

TEST_CASE("disturbed replays stay inside the tube (di2)") {
  auto m = builtin_system("di2");
  Vec x0(2);
  x0 << 0.8, -0.3;
  check_containment(m, Policy::constant(Vec::Zero(1)), x0, 0.05, 30, 200, 29);
}
