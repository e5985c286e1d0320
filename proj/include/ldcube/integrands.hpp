#pragma once

// Integrands g: T -> R^q and the bundled test problems. A problem pairs an
// integrand with the true measure it is integrated against.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldcube/matrix.hpp"
#include "ldcube/measures.hpp"

namespace ldcube {

// Implementations must be safe to call from several threads at once.
class Integrand {
 public:
  virtual ~Integrand() = default;

  virtual std::size_t input_size() const = 0;
  virtual std::size_t output_size() const = 0;

  virtual void evaluate_point(std::span<const double> t, std::span<double> out) const = 0;

  // Row i of `values` (n x q, already sized) receives g(samples row i).
  // Override when the whole batch can be handled more cheaply at once.
  virtual void evaluate_batch(const Matrix& samples, Matrix& values) const;
};

using IntegrandPtr = std::shared_ptr<const Integrand>;

using PointFunction = std::function<void(std::span<const double>, std::span<double>)>;

IntegrandPtr make_integrand(std::size_t input_size, std::size_t output_size, PointFunction f);
IntegrandPtr constant_integrand(std::size_t input_size, std::vector<double> value);

// a * g1 + b * g2, evaluated elementwise on the two value matrices.
IntegrandPtr linear_combination(double a, IntegrandPtr g1, double b, IntegrandPtr g2);

struct Problem {
  IntegrandPtr integrand;
  MeasureSpec measure;
  std::size_t dimension = 0;
  std::optional<std::vector<double>> known_mean;  // exact, for testing
  std::string label;

  std::size_t output_size() const { return integrand->output_size(); }
};

// n x q values, row i = g(sample i). Throws EvaluationError naming the first
// row with a non-finite value.
Matrix evaluate(const Problem& problem, const TransformedBatch& samples);
Matrix evaluate(const Integrand& integrand, const Matrix& samples);

struct AsianOption {
  double spot = 100.0;
  double strike = 100.0;
  double rate = 0.05;
  double volatility = 0.2;
  double maturity = 1.0;
  std::size_t monitoring_dates = 4;  // equally spaced, t_j = j T / d
};

// Discounted expected payoff of the geometric-average Asian call.
double geometric_asian_call_price(const AsianOption& option);

Problem product_problem(std::size_t dimension);
Problem sum_squares_problem(std::size_t dimension);
Problem geometric_asian_call_problem(const AsianOption& option = {});

// Product (d = 3), SumSquares (d = 6), GeometricAsianCall and Beam with
// their default parameters.
std::vector<Problem> builtin_problems();

// Catalogue lookup by label: "product", "sum-squares", "geometric-asian-call",
// "beam". `dimension` applies to product and sum-squares (0 keeps the
// default) and must be 0 or match for the fixed-dimension problems.
Problem builtin_problem(const std::string& label, std::size_t dimension = 0);

std::vector<std::string> builtin_problem_labels();

}  // namespace ldcube
