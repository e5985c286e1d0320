#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "ldcube/error.hpp"
#include "ldcube/integrands.hpp"

using namespace ldcube;

namespace {

Matrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(n, d);
  for (double& v : m.values()) v = u(rng);
  return m;
}

}  // namespace

TEST_CASE("evaluate examples") {
  const auto product = product_problem(3);
  CHECK(evaluate(*product.integrand, Matrix(1, 3, 1.0))(0, 0) == 1.0);

  const auto c = constant_integrand(2, {4.0, -1.5});
  const auto values = evaluate(*c, random_matrix(5, 2, 1));
  CHECK(values.rows() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(values(i, 0) == 4.0);
    CHECK(values(i, 1) == -1.5);
  }
}

TEST_CASE("catalogue known means") {
  CHECK(product_problem(3).known_mean->at(0) == 0.125);
  CHECK(sum_squares_problem(6).known_mean->at(0) == 2.0);
  // closed form, frozen at 20 digits from tests/oracles/asian_oracle.py
  CHECK(geometric_asian_call_problem().known_mean->at(0) ==
        doctest::Approx(6.7334874325269288697).epsilon(1e-13));

  const auto all = builtin_problems();
  REQUIRE(all.size() == 4);
  CHECK(all[0].label == "product");
  CHECK(all[1].label == "sum-squares");
  CHECK(all[1].dimension == 6);
  CHECK(all[2].label == "geometric-asian-call");
  CHECK(all[2].dimension == 4);
  CHECK(all[3].label == "beam");
  CHECK(!all[3].known_mean);
  CHECK(all[3].output_size() == 31);

  CHECK(builtin_problem("product", 5).dimension == 5);
  CHECK_THROWS_AS(builtin_problem("beam", 4), InvalidArgument);
  CHECK_THROWS_AS(builtin_problem("arithmetic-asian"), InvalidArgument);
}

TEST_CASE("geometric Asian payoff on a known path") {
  const AsianOption option{};
  const auto problem = geometric_asian_call_problem(option);
  Matrix zero(1, 4, 0.0);
  // W = 0 on all dates: geometric average is S0 exp((r - s^2/2) mean t)
  const double average = 100.0 * std::exp((0.05 - 0.02) * 0.625);
  CHECK(evaluate(*problem.integrand, zero)(0, 0) ==
        doctest::Approx(std::exp(-0.05) * (average - 100.0)).epsilon(1e-14));
  Matrix low(1, 4, -1.0);
  CHECK(evaluate(*problem.integrand, low)(0, 0) == 0.0);
}

TEST_CASE("linear combinations are exact elementwise") {
  const auto g1 = product_problem(4).integrand;
  const auto g2 = sum_squares_problem(4).integrand;
  const auto x = random_matrix(64, 4, 7);
  const auto v1 = evaluate(*g1, x), v2 = evaluate(*g2, x);
  const auto combo = evaluate(*linear_combination(2.5, g1, -0.75, g2), x);
  for (std::size_t i = 0; i < 64; ++i) CHECK(combo(i, 0) == 2.5 * v1(i, 0) + -0.75 * v2(i, 0));
  CHECK_THROWS_AS(linear_combination(1.0, g1, 1.0, product_problem(3).integrand), InvalidArgument);
}

TEST_CASE("non-finite values name the row") {
  const auto g = make_integrand(1, 1, [](std::span<const double> t, std::span<double> out) {
    out[0] = 1.0 / (t[0] - 0.5);
  });
  Matrix x(4, 1, 0.25);
  x(2, 0) = 0.5;
  try {
    evaluate(*g, x);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.row() == 2);
  }
  CHECK_THROWS_AS(evaluate(*g, Matrix(1, 2)), InvalidArgument);
}

TEST_CASE("single-output problems still yield n x 1 matrices") {
  const auto v = evaluate(*sum_squares_problem(2).integrand, random_matrix(3, 2, 3));
  CHECK(v.rows() == 3);
  CHECK(v.cols() == 1);
}

TEST_CASE("integrands evaluate concurrently") {
  const auto problem = builtin_problem("beam");
  Matrix x(16, 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1.0, 1.2);
  for (double& v : x.values()) v = u(rng);
  const auto reference = evaluate(*problem.integrand, x);
  std::vector<Matrix> results(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] { results[t] = evaluate(*problem.integrand, x); });
  }
  for (auto& th : threads) th.join();
  for (const auto& r : results) CHECK(r == reference);
}
