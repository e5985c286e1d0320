#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ldcube/error.hpp"
#include "ldcube/stopping.hpp"

using namespace ldcube;

namespace {

Problem constant_problem(double c) {
  return {constant_integrand(2, {c}), UniformBox{{0, 0}, {1, 1}}, 2, std::vector<double>{c}, "constant"};
}

Problem cosine_problem() {
  auto g = make_integrand(2, 1, [](std::span<const double> t, std::span<double> out) {
    out[0] = 1.0 + std::cos(2.0 * std::numbers::pi * t[0]);
  });
  return {g, UniformBox{{0, 0}, {1, 1}}, 2, std::vector<double>{1.0}, "cosine"};
}

// smooth and positive, like the beam tip as a function of stiffness
Problem beam_like_problem() {
  auto g = make_integrand(3, 1, [](std::span<const double> t, std::span<double> out) {
    out[0] = std::exp(-t[0]) + 0.5 * std::exp(-t[1]) + 0.25 * std::exp(-t[2]);
  });
  return {g, UniformBox{{1, 1, 1}, {1.2, 1.2, 1.2}}, 3, std::nullopt, "smooth"};
}

bool same(const StoppingResult& a, const StoppingResult& b) {
  return a.estimate == b.estimate && a.error_bound == b.error_bound && a.n_used == b.n_used &&
         a.stages == b.stages && a.converged == b.converged;
}

}  // namespace

TEST_CASE("check_tolerance") {
  const ToleranceSpec relative{0.0, 0.01};
  const std::vector<double> estimate{100.0};
  CHECK(check_tolerance(std::vector<double>{0.0}, std::vector<double>{5.0}, ToleranceSpec{1e-9, 0}));
  CHECK(check_tolerance(std::vector<double>{0.5}, estimate, relative));
  CHECK_FALSE(check_tolerance(std::vector<double>{1.5}, estimate, relative));
  CHECK_FALSE(check_tolerance(std::vector<double>{0.1, 2.0}, std::vector<double>{1.0, 1.0},
                              ToleranceSpec{1.0, 0.0}));
  CHECK(check_tolerance(std::vector<double>{0.1, 2.0}, std::vector<double>{1.0, 1.0}, ToleranceSpec{0.5, 2.0}));
  CHECK_THROWS_AS(ToleranceSpec({0.0, 0.0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(ToleranceSpec({-1.0, 0.0}).validate(), InvalidArgument);
}

TEST_CASE("Student t quantile") {
  // tests/oracles/quantile_oracle.py (mpmath incomplete beta)
  CHECK(student_t_quantile(0.995, 15) == doctest::Approx(2.9467128834752389179).epsilon(1e-12));
}

TEST_CASE("wavenumber map moves large coefficients to low wavenumbers") {
  // frequencies +-1 of an 8-point transform: index 7 pairs with 3 and swaps
  const std::vector<double> magnitude{1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5};
  const std::vector<std::size_t> expected{0, 1, 2, 7, 4, 5, 6, 3};
  CHECK(wavenumber_map(magnitude) == expected);

  const std::vector<double> flat(16, 1.0);
  const auto identity = wavenumber_map(flat);
  for (std::size_t p = 0; p < 16; ++p) CHECK(identity[p] == p);
  CHECK_THROWS_AS(wavenumber_map(std::vector<double>(6, 1.0)), InvalidArgument);
}

TEST_CASE("constant integrand converges immediately under both criteria") {
  const auto p = constant_problem(3.25);
  const auto r = integrate_replicated(p, {1e-6, 0});
  CHECK(r.converged);
  CHECK(r.stages == 0);
  CHECK(r.n_used == 256);
  CHECK(r.error_bound[0] == 0.0);
  CHECK(r.estimate[0] == 3.25);

  const auto f = integrate_fourier_lattice(p, {1e-6, 0});
  CHECK(f.converged);
  CHECK(f.stages == 0);
  CHECK(f.error_bound[0] == doctest::Approx(0.0));
  CHECK(f.estimate[0] == 3.25);
}

TEST_CASE("a low-frequency periodic integrand stops once the top band is empty") {
  FourierOptions options;
  options.n_init = 4;
  options.periodization = Periodization::None;
  const auto r = integrate_fourier_lattice(cosine_problem(), {1e-8, 0}, options);
  CHECK(r.converged);
  CHECK(r.n_used == 8);
  CHECK(std::fabs(r.estimate[0] - 1.0) <= 1e-10);
  CHECK(r.error_bound[0] <= 1e-12);
}

TEST_CASE("product problem with the replicated criterion") {
  ReplicatedOptions options;
  options.seed = 3;
  const auto r = integrate_replicated(product_problem(3), {1e-4, 0}, options);
  CHECK(r.converged);
  CHECK(r.error_bound[0] <= 1e-4);
  CHECK(std::fabs(r.estimate[0] - 0.125) <= 1e-4);
  CHECK(r.replications == 16);
  CHECK(r.n_used == (std::size_t{256} << r.stages));
}

TEST_CASE("sum of squares with the Fourier criterion") {
  FourierOptions options;
  options.seed = 8;
  options.n_max = std::size_t{1} << 16;
  const auto r = integrate_fourier_lattice(sum_squares_problem(4), {1e-2, 0}, options);
  CHECK(r.converged);
  CHECK(r.error_bound[0] <= 1e-2);
  CHECK(std::fabs(r.estimate[0] - 4.0 / 3.0) <= 1e-2);
}

TEST_CASE("the Fourier bound decays for a smooth periodized integrand") {
  FourierOptions options;
  options.n_init = 16;
  double previous = INFINITY;
  for (std::size_t n_max = 64; n_max <= 16384; n_max *= 4) {
    options.n_max = n_max;
    const auto r = integrate_fourier_lattice(beam_like_problem(), {1e-14, 0}, options);
    CHECK_FALSE(r.converged);
    CHECK(r.n_used == n_max);
    CHECK(r.error_bound[0] < previous);
    previous = r.error_bound[0];
  }
}

TEST_CASE("budget exhaustion is reported, never hidden") {
  ReplicatedOptions options;
  options.n_max = options.n_init;
  const auto r = integrate_replicated(geometric_asian_call_problem(), {1e-8, 0}, options);
  CHECK_FALSE(r.converged);
  CHECK(r.n_used == 256);
  CHECK(r.stages == 0);
  CHECK(r.error_bound[0] > 1e-8);

  FourierOptions fourier;
  fourier.n_max = 1024;
  const auto f = integrate_fourier_lattice(geometric_asian_call_problem(), {1e-8, 0}, fourier);
  CHECK_FALSE(f.converged);
  CHECK(f.n_used == 1024);
  CHECK(f.stages == 2);
}

TEST_CASE("fixed seeds reproduce results bitwise") {
  ReplicatedOptions options;
  options.seed = 41;
  options.kind = GeneratorKind::Halton;
  CHECK(same(integrate_replicated(sum_squares_problem(3), {1e-3, 0}, options),
             integrate_replicated(sum_squares_problem(3), {1e-3, 0}, options)));
  FourierOptions fourier;
  fourier.seed = 41;
  CHECK(same(integrate_fourier_lattice(geometric_asian_call_problem(), {1e-2, 0}, fourier),
             integrate_fourier_lattice(geometric_asian_call_problem(), {1e-2, 0}, fourier)));
}

TEST_CASE("vector outputs use the worst component") {
  auto g = make_integrand(1, 2, [](std::span<const double> t, std::span<double> out) {
    out[0] = 1.0;
    out[1] = t[0] * t[0] * t[0] * 50.0;
  });
  const Problem p{g, UniformBox{{0}, {1}}, 1, std::nullopt, "pair"};
  ReplicatedOptions options;
  options.kind = GeneratorKind::Lattice;
  const auto r = integrate_replicated(p, {1e-4, 0}, options);
  CHECK(r.converged);
  CHECK(r.error_bound[0] == 0.0);
  CHECK(r.error_bound[1] <= 1e-4);
  CHECK(r.stages > 0);
}

TEST_CASE("invalid options") {
  const auto p = product_problem(2);
  ReplicatedOptions few;
  few.replicates = 3;
  CHECK_THROWS_AS(integrate_replicated(p, {}, few), InvalidArgument);
  ReplicatedOptions odd;
  odd.n_init = 100;
  CHECK_THROWS_AS(integrate_replicated(p, {}, odd), InvalidArgument);
  ReplicatedOptions plain;
  plain.randomization = Randomization::None;
  CHECK_THROWS_AS(integrate_replicated(p, {}, plain), PolicyError);
  FourierOptions sobol;
  sobol.kind = GeneratorKind::Sobol;
  CHECK_THROWS_AS(integrate_fourier_lattice(p, {}, sobol), InvalidArgument);
  FourierOptions big;
  big.n_max = std::size_t{1} << 21;
  CHECK_THROWS_AS(integrate_fourier_lattice(p, {}, big), CapacityError);
}
