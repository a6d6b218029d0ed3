// Copyright 2026 The trajpref Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "trajpref/collision.hpp"
#include "unit/fixtures.hpp"

using namespace trajpref;
using fixtures::constant;
using fixtures::line;

TEST_CASE("pairwise distances of a 3-4-5 pair")
{
  const std::vector<Trajectory> mode{constant({0, 0}, 4), constant({3, 4}, 4)};
  const auto d = pairwise_distances(mode);
  for (std::size_t t = 0; t < 4; ++t) {
    CHECK(d(0, 1, t) == 5.0);
    CHECK(d(1, 0, t) == 5.0);
    CHECK(d(0, 0, t) == 0.0);
    CHECK(d(1, 1, t) == 0.0);
  }
}

TEST_CASE("a single agent gives a zero tensor")
{
  const auto d = pairwise_distances(std::vector<Trajectory>{line({1, 2}, {0.5, 0}, 6)});
  CHECK(d.agents() == 1);
  CHECK(d.steps() == 6);
  for (double v : d.values()) {
    CHECK(v == 0.0);
  }
}

TEST_CASE("crossing distances match the high-precision oracle")
{
  // agent 0 along x from (-1, 0), agent 1 along y from (0, -1.5)
  const std::vector<Trajectory> mode{line({-1, 0}, {1, 0}, 3), line({0, -1.5}, {0, 1.25}, 3)};
  const auto d = pairwise_distances(mode);
  CHECK(d(0, 1, 0) == doctest::Approx(1.802775637731994646559611).epsilon(1e-15));
  CHECK(d(0, 1, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(d(0, 1, 2) == doctest::Approx(1.414213562373095048801689).epsilon(1e-15));
}

TEST_CASE("mismatched trajectory lengths are rejected")
{
  const std::vector<Trajectory> mode{constant({0, 0}, 3), constant({1, 0}, 4)};
  CHECK_THROWS_AS(pairwise_distances(mode), std::invalid_argument);
}

TEST_CASE("repeller matrix entries")
{
  RepellerParams p;
  SUBCASE("distances at or beyond r give zeros")
  {
    const auto a = repeller_matrix(pairwise_distances(std::vector<Trajectory>{constant({0, 0}, 2), constant({1, 0}, 2)}), p);
    for (double v : a.values()) {
      CHECK(v == 0.0);
    }
  }
  SUBCASE("d = 0.5 with r = 1 gives 0.5 in both slots")
  {
    DistanceTensor d(2, 1);
    d(0, 1, 0) = d(1, 0, 0) = 0.5;
    const auto a = repeller_matrix(d, p);
    CHECK(a(0, 1, 0) == 0.5);
    CHECK(a(1, 0, 0) == 0.5);
    CHECK(a(0, 0, 0) == 0.0);
  }
  SUBCASE("diagonal stays zero for any radius")
  {
    p.radius = 50.0;
    const auto a = repeller_matrix(pairwise_distances(std::vector<Trajectory>{constant({0, 0}, 2), constant({0, 0}, 2)}), p);
    CHECK(a(0, 0, 1) == 0.0);
    CHECK(a(1, 1, 0) == 0.0);
    CHECK(a(0, 1, 0) == 1.0);
  }
  SUBCASE("invalid parameters")
  {
    p.radius = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
}

TEST_CASE("repeller cost fixtures")
{
  PairwiseTensor zero(2, 3);
  CHECK(repeller_cost(zero, 1e-6) == 0.0);

  PairwiseTensor half(2, 1);
  half(0, 1, 0) = half(1, 0, 0) = 0.5;
  CHECK(repeller_cost(half, 1e-6) == doctest::Approx(0.4999997500001249999375).epsilon(1e-15));

  PairwiseTensor ones(2, 1);
  ones(0, 1, 0) = ones(1, 0, 0) = 1.0;
  CHECK(repeller_cost(ones, 1e-6) == doctest::Approx(0.9999995000002499998750001).epsilon(1e-15));
}

TEST_CASE("collision detection")
{
  SUBCASE("parallel lanes 3 m apart")
  {
    const std::vector<Trajectory> mode{line({0, 0}, {1, 0}, 10), line({0, 3}, {1, 0}, 10)};
    const auto c = detect_collisions(mode, 1.0);
    CHECK(c.count == 0);
    CHECK_FALSE(c.collided);
  }
  SUBCASE("two agents through one point at one step")
  {
    const std::vector<Trajectory> mode{line({-2, 0}, {1, 0}, 5), line({0, -2}, {0, 1}, 5)};
    const auto c = detect_collisions(mode, 1.0);
    CHECK(c.count == 1);
    CHECK(c.collided);
  }
  SUBCASE("three converging agents count three pairs")
  {
    const std::vector<Trajectory> mode{
      line({-3, 0}, {1, 0}, 4), line({3, 0}, {-1, 0}, 4), line({0, 3.2}, {0, -1}, 4)};
    CHECK(detect_collisions(mode, 1.0).count == 3);
  }
  SUBCASE("exactly at the threshold is not a collision")
  {
    const std::vector<Trajectory> mode{constant({0, 0}, 2), constant({1, 0}, 2)};
    CHECK(detect_collisions(mode, 1.0).count == 0);
  }
}

TEST_CASE("property: repeller cost vanishes exactly when no pair is closer than r")
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RepellerParams p;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Trajectory> mode;
    for (int a = 0; a < 3; ++a) {
      Trajectory t;
      for (int s = 0; s < 4; ++s) {
        t.push_back({u(rng) * 2.0, u(rng) * 2.0});
      }
      mode.push_back(t);
    }
    const double r = repeller_cost(repeller_matrix(pairwise_distances(mode), p), p.epsilon);
    const bool close = min_pairwise_distance(mode) < p.radius;
    CHECK((r > 0.0) == close);
    CHECK(detect_collisions(mode, p.radius).collided == close);
    const int count = detect_collisions(mode, p.radius).count;
    CHECK(count <= 3);
  }
}

TEST_CASE("property: pulling one close pair closer never lowers the repeller cost")
{
  // With a single interacting pair the count of positive entries is fixed, so the
  // cost is monotone in that pair's distance.
  RepellerParams p;
  double previous = -1.0;
  for (double d = 0.95; d > 0.0; d -= 0.05) {
    const std::vector<Trajectory> mode{constant({0, 0}, 1), constant({d, 0}, 1), constant({0, 10}, 1)};
    const double r = repeller_cost(repeller_matrix(pairwise_distances(mode), p), p.epsilon);
    CHECK(r >= previous);
    previous = r;
  }
}

TEST_CASE("repeller gradient matches central differences")
{
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  RepellerParams p;
  const double h = 1e-5;
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Trajectory> mode;
    for (int a = 0; a < 3; ++a) {
      Trajectory t;
      for (int s = 0; s < 3; ++s) {
        t.push_back({u(rng) + 0.4 * a, u(rng)});
      }
      mode.push_back(t);
    }
    const auto g = repeller_cost_gradient(mode, p);
    auto cost = [&](const std::vector<Trajectory> & m) {
      return repeller_cost(repeller_matrix(pairwise_distances(m), p), p.epsilon);
    };
    CHECK(g.cost == doctest::Approx(cost(mode)).epsilon(1e-14));
    // skip instances near a kink: a distance within 1e-3 of r
    const auto d = pairwise_distances(mode);
    bool near_kink = false;
    for (double v : d.values()) {
      near_kink = near_kink || (v > 0.0 && std::abs(v - p.radius) < 1e-3);
    }
    if (near_kink) {
      continue;
    }
    for (std::size_t a = 0; a < mode.size(); ++a) {
      for (std::size_t s = 0; s < mode[a].size(); ++s) {
        for (int c = 0; c < 2; ++c) {
          auto plus = mode;
          auto minus = mode;
          (c == 0 ? plus[a][s].x : plus[a][s].y) += h;
          (c == 0 ? minus[a][s].x : minus[a][s].y) -= h;
          const double fd = (cost(plus) - cost(minus)) / (2 * h);
          const double an = c == 0 ? g.d_positions[a][s].x : g.d_positions[a][s].y;
          CHECK(fixtures::rel_err(an, fd) < 1e-5);
        }
      }
    }
    ++checked;
  }
  CHECK(checked > 30);
}
