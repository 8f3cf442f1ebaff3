#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "ttvseg/prox.hpp"

using namespace ttvseg;

TEST_SUITE("prox") {

TEST_CASE("rho_a") {
  CHECK(rho_a(0.0, 3.0) == 0.0);
  CHECK(rho_a(1.0, 7.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rho_a(-1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rho_a(2.0, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(rho_a(-2.0, 1.0) == rho_a(2.0, 1.0));
  CHECK(rho_a(1e9, 2.0) < 3.0);
}

TEST_CASE("tl1_threshold") {
  CHECK(tl1_threshold({1.0, 1.0}) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(tl1_threshold({1.0, 0.2}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(tl1_threshold({4.0, 0.0}) == 0.0);
}

TEST_CASE("TL1Params validation") {
  CHECK_THROWS_AS(TL1Params({0.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(TL1Params({1.0, -0.1}).validate(), std::invalid_argument);
  CHECK_NOTHROW(TL1Params({1.0, 0.0}).validate());
}

TEST_CASE("tl1_prox_scalar examples") {
  CHECK(tl1_prox_scalar(1.4, {1.0, 1.0}) == 0.0);
  CHECK(tl1_prox_scalar(1.5, {1.0, 1.0}) == 0.0);
  for (double t : {-3.0, -0.1, 0.0, 0.2, 9.0}) CHECK(tl1_prox_scalar(t, {2.0, 0.0}) == t);

  const double y = tl1_prox_scalar(2.0, {1.0, 0.1});
  const double ref = oracle::tl1_grid_argmin(2.0, 1.0, 0.1, -3.0, 3.0, 1e-6);
  CHECK(std::abs(y - ref) <= 1e-5);
}

TEST_CASE("tl1_prox_scalar is odd and shrinking") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ad(0.5, 100), ld(1e-3, 1), td(-10, 10);
  for (int i = 0; i < 5000; ++i) {
    const TL1Params p{ad(rng), ld(rng)};
    const double t = td(rng);
    const double y = tl1_prox_scalar(t, p);
    CHECK(tl1_prox_scalar(-t, p) == -y);
    CHECK(std::abs(y) <= std::abs(t));
  }
}

TEST_CASE("tl1_prox_scalar is a global minimiser on a fine grid") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ad(0.5, 100), ld(1e-3, 1), td(-10, 10);
  for (int i = 0; i < 200; ++i) {
    const double a = ad(rng), lam = ld(rng), t = td(rng);
    const double fy = oracle::tl1_objective(tl1_prox_scalar(t, {a, lam}), t, a, lam);
    double best = oracle::tl1_objective(-10.0, t, a, lam);
    for (int s = 1; s <= 200000; ++s) {
      best = std::min(best, oracle::tl1_objective(-10.0 + s * 1e-4, t, a, lam));
    }
    CHECK(fy <= best + 1e-9);
  }
}

TEST_CASE("minimiser property on both sides of the threshold") {
  for (double a : {1.0, 5.0, 10.0, 100.0}) {
    for (double lam : {0.01, 0.1, 1.0}) {
      const double tau = tl1_threshold({a, lam});
      for (double t : {tau - 1e-3, tau + 1e-3}) {
        const double y = tl1_prox_scalar(t, {a, lam});
        const double fy = oracle::tl1_objective(y, t, a, lam);
        const double ref = oracle::tl1_grid_argmin(t, a, lam, -0.1, t + 0.1, 1e-5);
        CHECK(fy <= oracle::tl1_objective(ref, t, a, lam) + 1e-12);
      }
    }
  }
}

TEST_CASE("tl1_prox_field") {
  const TL1Params p{1.0, 0.1};
  const GradientField zero = tl1_prox_field(GradientField(3, 3), p);
  for (double v : zero.gx.values()) CHECK(v == 0.0);

  GradientField small(2, 3);
  const double tau = tl1_threshold(p);
  for (double& v : small.gx.values()) v = 0.9 * tau;
  for (double& v : small.gy.values()) v = -tau;
  const GradientField s = tl1_prox_field(small, p);
  for (double v : s.gx.values()) CHECK(v == 0.0);
  for (double v : s.gy.values()) CHECK(v == 0.0);

  GradientField one(4, 5);
  one.gy(2, 3) = 5.0;
  const GradientField o = tl1_prox_field(one, p);
  const double ref = oracle::tl1_grid_argmin(5.0, 1.0, 0.1, -6.0, 6.0, 1e-5);
  for (std::size_t k = 0; k < o.gx.size(); ++k) {
    CHECK(o.gx[k] == 0.0);
    if (k != 2 * 5 + 3) CHECK(o.gy[k] == 0.0);
  }
  CHECK(std::abs(o.gy(2, 3) - ref) <= 1e-4);
}

TEST_CASE("tl1_prox_field matches the scalar prox on odd sizes") {
  std::mt19937_64 rng(13);
  const TL1Params p{3.0, 0.4};
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 5}, {7, 9}, {17, 3}}) {
    const GradientField g(ImageGrid(m, n, oracle::random_vector(rng, m * n, -3, 3)),
                          ImageGrid(m, n, oracle::random_vector(rng, m * n, -3, 3)));
    const GradientField r = tl1_prox_field(g, p);
    for (std::size_t k = 0; k < g.gx.size(); ++k) {
      CHECK(r.gx[k] == tl1_prox_scalar(g.gx[k], p));
      CHECK(r.gy[k] == tl1_prox_scalar(g.gy[k], p));
    }
  }
}

TEST_CASE("l21_prox_field") {
  GradientField g(1, 3);
  g.gx[0] = 3.0;
  g.gy[0] = 4.0;
  g.gx[1] = 0.3;
  g.gy[1] = -0.4;
  const GradientField r = l21_prox_field(g, 1.0);
  CHECK(r.gx[0] == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(r.gy[0] == doctest::Approx(3.2).epsilon(1e-15));
  CHECK(r.gx[1] == 0.0);
  CHECK(r.gy[1] == 0.0);
  CHECK(r.gx[2] == 0.0);
  CHECK(r.gy[2] == 0.0);

  CHECK(l21_prox_field(g, 0.0) == g);
  CHECK_THROWS_AS(l21_prox_field(g, -1.0), std::invalid_argument);
}

TEST_CASE("l21_prox_field solves the pixelwise problem") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> d(-2, 2), ld(0.05, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    GradientField g(1, 1);
    g.gx[0] = d(rng);
    g.gy[0] = d(rng);
    const double lam = ld(rng);
    const GradientField r = l21_prox_field(g, lam);
    auto obj = [&](double x, double y) {
      return lam * std::hypot(x, y) + 0.5 * ((x - g.gx[0]) * (x - g.gx[0]) + (y - g.gy[0]) * (y - g.gy[0]));
    };
    // Coarse grid then a fine one around the coarse winner.
    double bx = 0, by = 0, best = obj(0, 0);
    for (double x = -2; x <= 2; x += 1e-2) {
      for (double y = -2; y <= 2; y += 1e-2) {
        if (obj(x, y) < best) best = obj(x, y), bx = x, by = y;
      }
    }
    const double cx = bx, cy = by;
    for (double x = cx - 0.01; x <= cx + 0.01; x += 2e-5) {
      for (double y = cy - 0.01; y <= cy + 0.01; y += 2e-5) {
        if (obj(x, y) < best) best = obj(x, y), bx = x, by = y;
      }
    }
    CHECK(std::abs(r.gx[0] - bx) <= 1e-4);
    CHECK(std::abs(r.gy[0] - by) <= 1e-4);
  }
}

TEST_CASE("project_simplex examples") {
  auto proj = [](std::vector<double> y) { return project_simplex(y); };
  CHECK(proj({0.2, 0.3, 0.5}) == std::vector<double>{0.2, 0.3, 0.5});
  CHECK(proj({1, 1}) == std::vector<double>{0.5, 0.5});
  CHECK(proj({2, 0, 0}) == std::vector<double>{1, 0, 0});
  CHECK(proj({5}) == std::vector<double>{1});
  CHECK_THROWS_AS(proj({}), std::invalid_argument);
}

TEST_CASE("project_simplex matches support enumeration and is idempotent") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<int> nd(1, 6);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = static_cast<std::size_t>(nd(rng));
    const auto y = oracle::random_vector(rng, n, -3, 3);
    const auto x = project_simplex(y);
    const auto ref = oracle::simplex_by_enumeration(y);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(x[k] >= 0.0);
      CHECK(std::abs(x[k] - ref[k]) <= 1e-12);
      sum += x[k];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(project_simplex(x) == x);
  }
}

TEST_CASE("project_membership") {
  const MembershipField z = project_membership({ImageGrid(3, 2), ImageGrid(3, 2)});
  for (std::size_t k = 0; k < 2; ++k) {
    for (double v : z[k].values()) CHECK(v == 0.5);
  }

  const MembershipField valid({ImageGrid(2, 2, 0.25), ImageGrid(2, 2, 0.75)});
  CHECK(project_membership(valid.grids()) == valid);

  std::mt19937_64 rng(16);
  std::vector<ImageGrid> raw;
  for (int k = 0; k < 3; ++k) raw.emplace_back(4, 4, oracle::random_vector(rng, 16, -2, 2));
  const MembershipField u = project_membership(raw);
  CHECK(u.feasible());
  for (std::size_t x = 0; x < 16; ++x) {
    const auto ref = oracle::simplex_by_enumeration({raw[0][x], raw[1][x], raw[2][x]});
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(u[k][x] - ref[k]) <= 1e-12);
  }

  CHECK_THROWS_AS(project_membership({ImageGrid(2, 2), ImageGrid(2, 3)}), std::invalid_argument);
}

}
