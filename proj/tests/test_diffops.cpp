#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "ttvseg/diffops.hpp"

using namespace ttvseg;

namespace {

ImageGrid random_grid(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  return ImageGrid(m, n, oracle::random_vector(rng, m * n));
}

double norm(const ImageGrid& g) { return std::sqrt(inner(g, g)); }

}  // namespace

TEST_SUITE("diffops") {

TEST_CASE("gradient: periodic forward differences") {
  const GradientField zero = gradient(ImageGrid(3, 4, 2.5));
  for (double v : zero.gx.values()) CHECK(v == 0.0);
  for (double v : zero.gy.values()) CHECK(v == 0.0);

  const GradientField row = gradient(ImageGrid(1, 2, std::vector<double>{3, 5}));
  CHECK(row.gx[0] == 2.0);
  CHECK(row.gx[1] == -2.0);
  CHECK(row.gy[0] == 0.0);
  CHECK(row.gy[1] == 0.0);

  const GradientField col = gradient(ImageGrid(2, 1, std::vector<double>{1, 4}));
  CHECK(col.gy[0] == 3.0);
  CHECK(col.gy[1] == -3.0);
  CHECK(col.gx[0] == 0.0);
  CHECK(col.gx[1] == 0.0);
}

TEST_CASE("gradient matches the dense difference matrix") {
  std::mt19937_64 rng(1);
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 5}, {4, 1}, {3, 7}, {6, 6}}) {
    const ImageGrid u = random_grid(rng, m, n);
    const oracle::DenseGradient G(m, n);
    const auto ref = G.apply(std::vector<double>(u.values().begin(), u.values().end()));
    const GradientField g = gradient(u);
    for (std::size_t k = 0; k < u.size(); ++k) {
      CHECK(g.gx[k] == doctest::Approx(ref[k]).epsilon(1e-15));
      CHECK(g.gy[k] == doctest::Approx(ref[u.size() + k]).epsilon(1e-15));
    }
  }
}

TEST_CASE("divergence is the negative adjoint of gradient") {
  std::mt19937_64 rng(2);
  CHECK(norm(divergence(GradientField(4, 4))) == 0.0);
  CHECK(norm(divergence(gradient(ImageGrid(5, 3, 1.25)))) == 0.0);

  std::uniform_int_distribution<std::size_t> dim(1, 16);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng);
    const ImageGrid u = random_grid(rng, m, n);
    const GradientField g(random_grid(rng, m, n), random_grid(rng, m, n));
    const double lhs = inner(gradient(u), g);
    const double rhs = -inner(u, divergence(g));
    const double scale = norm(u) * std::sqrt(inner(g, g));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("divergence rejects mismatched components") {
  GradientField g;
  g.gx = ImageGrid(2, 3);
  g.gy = ImageGrid(3, 2);
  CHECK_THROWS_AS(divergence(g), std::invalid_argument);
}

TEST_CASE("laplacian spectrum") {
  const LaplacianSpectrum s2(2, 2);
  CHECK(s2(0, 0) == 0.0);
  CHECK(s2(1, 1) == doctest::Approx(-8.0));

  const LaplacianSpectrum big(17, 12);
  for (double e : big.eigenvalues()) {
    CHECK(e <= 0.0);
    CHECK(e >= -8.0);
  }
  CHECK(big(0, 0) == 0.0);
}

TEST_CASE("laplacian spectrum matches -G^T G on Fourier modes") {
  using cd = std::complex<double>;
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{4, 4}, {3, 5}, {8, 8}, {2, 7}}) {
    const oracle::DenseGradient G(m, n);
    const std::size_t N = m * n;
    const LaplacianSpectrum spec(m, n);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t l = 0; l < n; ++l) {
        std::vector<cd> mode(N);
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            const double ph = 2 * std::numbers::pi * (double(i * k) / m + double(j * l) / n);
            mode[i * n + j] = std::polar(1.0, ph);
          }
        }
        // (-G^T G) mode, evaluated with the dense matrix.
        std::vector<cd> gm(2 * N);
        for (std::size_t r = 0; r < 2 * N; ++r) {
          for (std::size_t c = 0; c < N; ++c) gm[r] += G.g[r * N + c] * mode[c];
        }
        for (std::size_t c = 0; c < N; ++c) {
          cd s = 0.0;
          for (std::size_t r = 0; r < 2 * N; ++r) s += G.g[r * N + c] * gm[r];
          CHECK(std::abs(-s - spec(k, l) * mode[c]) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("screened Poisson solve") {
  std::mt19937_64 rng(4);

  SUBCASE("beta2 = 0 divides by beta1") {
    const ImageGrid rhs = random_grid(rng, 6, 9);
    const ImageGrid v = solve_screened_poisson(rhs, 0.5, 0.0, LaplacianSpectrum(6, 9));
    for (std::size_t k = 0; k < rhs.size(); ++k) CHECK(v[k] == doctest::Approx(rhs[k] / 0.5).epsilon(1e-13));
  }
  SUBCASE("constant rhs gives a constant solution") {
    const ImageGrid v = solve_screened_poisson(ImageGrid(5, 8, 3.0), 0.25, 1.0, LaplacianSpectrum(5, 8));
    for (double x : v.values()) CHECK(x == doctest::Approx(12.0).epsilon(1e-13));
  }
  SUBCASE("round trip through the dense operator on 8x8") {
    const oracle::DenseGradient G(8, 8);
    for (double b1 : {0.1, 0.25, 1.0}) {
      for (double b2 : {0.0, 0.25, 1.0}) {
        const auto vstar = oracle::random_vector(rng, 64);
        const auto rhs = oracle::matvec(G.screened_matrix(b1, b2), vstar);
        const ImageGrid v = solve_screened_poisson(ImageGrid(8, 8, rhs), b1, b2, LaplacianSpectrum(8, 8));
        for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(v[k] - vstar[k]) <= 1e-10);
      }
    }
  }
  SUBCASE("residual bound on random rhs, odd shapes") {
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{7, 5}, {16, 16}, {31, 12}}) {
      for (double b1 : {0.1, 0.25, 1.0}) {
        for (double b2 : {0.0, 0.25, 1.0}) {
          const ImageGrid rhs = random_grid(rng, m, n);
          const ImageGrid v = solve_screened_poisson(rhs, b1, b2, LaplacianSpectrum(m, n));
          const ImageGrid back = apply_screened_operator(v, b1, b2);
          double res = 0.0;
          for (std::size_t k = 0; k < rhs.size(); ++k) res += (back[k] - rhs[k]) * (back[k] - rhs[k]);
          CHECK(std::sqrt(res) <= 1e-8 * norm(rhs));
        }
      }
    }
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(solve_screened_poisson(ImageGrid(2, 2), 0.0, 1.0, LaplacianSpectrum(2, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_screened_poisson(ImageGrid(3, 2), 1.0, 1.0, LaplacianSpectrum(2, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("solver object is reusable") {
  std::mt19937_64 rng(8);
  ScreenedPoissonSolver solver(LaplacianSpectrum(9, 10), 0.25, 0.25);
  const ImageGrid a = random_grid(rng, 9, 10);
  const ImageGrid first = solver.solve(a);
  solver.solve(random_grid(rng, 9, 10));
  CHECK(solver.solve(a) == first);
}

}
