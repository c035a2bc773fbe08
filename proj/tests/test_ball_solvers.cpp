#include <doctest.h>
#include <racert/ball_solvers.hpp>

#include "oracles.hpp"

using namespace racert;
using namespace racert::oracles;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("linear ball minimum closed form") {
  CHECK(min_linear_over_ball(v2(1, 0), 0.0, v2(2, 0), 1.0) == doctest::Approx(1.0));
  CHECK(min_linear_over_ball(v2(3, 4), 2.0, v2(1, 1), 0.0) ==
        doctest::Approx(3.0 + 4.0 - 2.0));
}

TEST_CASE("linear ball minimum against a Monte-Carlo oracle") {
  CounterRng rng(41);
  for (int i = 0; i < 20; ++i) {
    int n = 2 + static_cast<int>(rng.next_u64() % 3);
    Vec p = random_vec(n, 2.0, rng);
    Vec center = random_vec(n, 1.0, rng);
    double k = rng.uniform(-1, 1);
    double radius = rng.uniform(0.1, 2.0);
    double closed = min_linear_over_ball(p, k, center, radius);
    double sampled = sampled_ball_min(
        [&](const Vec& x) { return p.dot(x) - k; }, center, radius, 100000,
        rng.next_u64());
    CHECK(closed <= sampled + 1e-12);
    CHECK(sampled - closed <= 0.05 * p.norm() * radius + 1e-9);
  }
}

TEST_CASE("quadratic ball minimum: closest point geometry") {
  Mat Q = Mat::Identity(2, 2);
  auto res = min_convex_quadratic_over_ball(Q, Vec::Zero(2), 0.0, v2(3, 0), 1.0);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(res.minimizer[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(res.on_boundary);
}

TEST_CASE("zero quadratic reduces to the linear closed form") {
  CounterRng rng(43);
  for (int i = 0; i < 50; ++i) {
    int n = 1 + static_cast<int>(rng.next_u64() % 5);
    Vec q = random_vec(n, 2.0, rng);
    Vec center = random_vec(n, 1.0, rng);
    double b = rng.uniform(-2, 2);
    double radius = rng.uniform(0.0, 2.0);
    auto res = min_convex_quadratic_over_ball(Mat::Zero(n, n), q, b, center, radius);
    double lin = min_linear_over_ball(q, -b, center, radius);
    CHECK(res.value == doctest::Approx(lin).epsilon(1e-9));
  }
}

TEST_CASE("interior minimizer is found when the ball contains it") {
  Mat Q = Mat::Identity(2, 2);
  auto res = min_convex_quadratic_over_ball(Q, v2(-1, 0), 0.0, v2(1, 0), 2.0);
  CHECK(res.value == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK_FALSE(res.on_boundary);
  CHECK(res.minimizer[0] == doctest::Approx(1.0));
}

TEST_CASE("zero radius evaluates at the center") {
  Mat Q = Mat::Identity(2, 2) * 2.0;
  auto res = min_convex_quadratic_over_ball(Q, v2(1, 1), 0.5, v2(1, -1), 0.0);
  CHECK(res.value == doctest::Approx(2.0 + 0.0 + 0.5));
  CHECK(res.minimizer == v2(1, -1));
}

TEST_CASE("singular quadratic with an unbounded flat direction hits the boundary") {
  Mat Q = Mat::Zero(2, 2);
  Q(0, 0) = 1.0;  // flat along the second coordinate
  Vec q = v2(0, 1);
  auto res = min_convex_quadratic_over_ball(Q, q, 0.0, v2(0, 0), 3.0);
  // minimum is attained at (0, -3): value -3
  CHECK(res.value == doctest::Approx(-3.0).epsilon(1e-8));
}

TEST_CASE("non-PSD quadratics are rejected") {
  Mat Q = Mat::Identity(2, 2);
  Q(1, 1) = -1.0;
  CHECK_THROWS_AS(min_convex_quadratic_over_ball(Q, Vec::Zero(2), 0.0, v2(0, 0), 1.0),
                  std::invalid_argument);
}

TEST_CASE("random PSD instances match the projected-gradient oracle") {
  CounterRng rng(47);
  int boundary_cases = 0;
  for (int i = 0; i < 500; ++i) {
    int n = 2 + static_cast<int>(rng.next_u64() % 5);  // dims 2..6
    Mat Q = random_psd(n, 0.2, 5.0, rng);
    Vec q = random_vec(n, 2.0, rng);
    Vec center = random_vec(n, 1.0, rng);
    double b = rng.uniform(-1, 1);
    double radius = rng.uniform(0.05, 2.0);
    auto res = min_convex_quadratic_over_ball(Q, q, b, center, radius);
    double pg = projected_gradient_ball_min(Q, q, b, center, radius, 5000);
    CHECK(res.value == doctest::Approx(pg).epsilon(1e-6));
    CHECK(res.value <= pg + 1e-9);  // never above the oracle's feasible value
    if (res.on_boundary) ++boundary_cases;
  }
  CHECK(boundary_cases > 50);  // both branches exercised
}

TEST_CASE("solver result is a lower bound on sampled values") {
  CounterRng rng(53);
  for (int i = 0; i < 30; ++i) {
    int n = 2 + static_cast<int>(rng.next_u64() % 2);
    Mat Q = random_psd(n, 0.0, 4.0, rng);  // allow singular
    Vec q = random_vec(n, 1.5, rng);
    Vec center = random_vec(n, 1.0, rng);
    double radius = rng.uniform(0.1, 1.5);
    auto res = min_convex_quadratic_over_ball(Q, q, 0.0, center, radius);
    double sampled = sampled_ball_min(
        [&](const Vec& x) { return 0.5 * x.dot(Q * x) + q.dot(x); }, center,
        radius, 20000, rng.next_u64());
    CHECK(res.value <= sampled + 1e-9);
  }
}
