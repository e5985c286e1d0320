#include <cmath>
#include <string>

#include "ldcube/error.hpp"
#include "ldcube/integrands.hpp"

namespace ldcube {
namespace {

class FunctionIntegrand final : public Integrand {
 public:
  FunctionIntegrand(std::size_t in, std::size_t out, PointFunction f)
      : in_(in), out_(out), f_(std::move(f)) {}

  std::size_t input_size() const override { return in_; }
  std::size_t output_size() const override { return out_; }
  void evaluate_point(std::span<const double> t, std::span<double> out) const override {
    f_(t, out);
  }

 private:
  std::size_t in_, out_;
  PointFunction f_;
};

class LinearCombination final : public Integrand {
 public:
  LinearCombination(double a, IntegrandPtr g1, double b, IntegrandPtr g2)
      : a_(a), b_(b), g1_(std::move(g1)), g2_(std::move(g2)) {}

  std::size_t input_size() const override { return g1_->input_size(); }
  std::size_t output_size() const override { return g1_->output_size(); }

  void evaluate_point(std::span<const double> t, std::span<double> out) const override {
    std::vector<double> second(out.size());
    g1_->evaluate_point(t, out);
    g2_->evaluate_point(t, second);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a_ * out[k] + b_ * second[k];
  }

  void evaluate_batch(const Matrix& samples, Matrix& values) const override {
    Matrix second(values.rows(), values.cols());
    g1_->evaluate_batch(samples, values);
    g2_->evaluate_batch(samples, second);
    auto v = values.values();
    const auto s = second.values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a_ * v[k] + b_ * s[k];
  }

 private:
  double a_, b_;
  IntegrandPtr g1_, g2_;
};

}  // namespace

void Integrand::evaluate_batch(const Matrix& samples, Matrix& values) const {
  for (std::size_t i = 0; i < samples.rows(); ++i) evaluate_point(samples.row(i), values.row(i));
}

IntegrandPtr make_integrand(std::size_t input_size, std::size_t output_size, PointFunction f) {
  if (input_size == 0 || output_size == 0) {
    throw InvalidArgument("integrand input and output sizes must be positive");
  }
  return std::make_shared<FunctionIntegrand>(input_size, output_size, std::move(f));
}

IntegrandPtr constant_integrand(std::size_t input_size, std::vector<double> value) {
  const std::size_t q = value.size();
  return make_integrand(input_size, q, [value = std::move(value)](std::span<const double>, std::span<double> out) {
    std::copy(value.begin(), value.end(), out.begin());
  });
}

IntegrandPtr linear_combination(double a, IntegrandPtr g1, double b, IntegrandPtr g2) {
  if (g1->input_size() != g2->input_size() || g1->output_size() != g2->output_size()) {
    throw InvalidArgument("linear combination needs integrands of matching shape");
  }
  return std::make_shared<LinearCombination>(a, std::move(g1), b, std::move(g2));
}

Matrix evaluate(const Integrand& integrand, const Matrix& samples) {
  if (samples.cols() != integrand.input_size()) {
    throw InvalidArgument("sample dimension " + std::to_string(samples.cols()) +
                          " does not match integrand input size " +
                          std::to_string(integrand.input_size()));
  }
  Matrix values(samples.rows(), integrand.output_size());
  integrand.evaluate_batch(samples, values);
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (double v : values.row(i)) {
      if (!std::isfinite(v)) throw EvaluationError(i, "integrand returned a non-finite value");
    }
  }
  return values;
}

Matrix evaluate(const Problem& problem, const TransformedBatch& samples) {
  if (samples.samples.cols() != problem.dimension) {
    throw InvalidArgument("sample dimension " + std::to_string(samples.samples.cols()) +
                          " does not match problem dimension " + std::to_string(problem.dimension));
  }
  return evaluate(*problem.integrand, samples.samples);
}

}  // namespace ldcube
