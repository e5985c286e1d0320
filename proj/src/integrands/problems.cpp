#include <cmath>
#include <numbers>

#include "ldcube/beam.hpp"
#include "ldcube/error.hpp"
#include "ldcube/integrands.hpp"

namespace ldcube {
namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::vector<double> monitoring_times(const AsianOption& option) {
  std::vector<double> t(option.monitoring_dates);
  for (std::size_t j = 0; j < t.size(); ++j) {
    t[j] = option.maturity * static_cast<double>(j + 1) / static_cast<double>(t.size());
  }
  return t;
}

void check_option(const AsianOption& o) {
  if (!(o.spot > 0.0 && o.strike > 0.0 && o.volatility > 0.0 && o.maturity > 0.0) ||
      o.monitoring_dates == 0 || !std::isfinite(o.rate)) {
    throw InvalidArgument("Asian option needs positive spot, strike, volatility, maturity and dates");
  }
}

}  // namespace

double geometric_asian_call_price(const AsianOption& option) {
  check_option(option);
  const auto t = monitoring_times(option);
  const double d = static_cast<double>(t.size());
  double mean_t = 0.0, var_w = 0.0;
  for (double a : t) {
    mean_t += a;
    for (double b : t) var_w += std::min(a, b);
  }
  mean_t /= d;
  var_w /= d * d;
  // log of the geometric average is normal with these moments
  const double mu = std::log(option.spot) +
                    (option.rate - 0.5 * option.volatility * option.volatility) * mean_t;
  const double sd = option.volatility * std::sqrt(var_w);
  const double d2 = (mu - std::log(option.strike)) / sd;
  return std::exp(-option.rate * option.maturity) *
         (std::exp(mu + 0.5 * sd * sd) * normal_cdf(d2 + sd) - option.strike * normal_cdf(d2));
}

Problem product_problem(std::size_t dimension) {
  if (dimension == 0) throw InvalidArgument("product problem needs d >= 1");
  auto g = make_integrand(dimension, 1, [](std::span<const double> t, std::span<double> out) {
    double p = 1.0;
    for (double v : t) p *= v;
    out[0] = p;
  });
  return {std::move(g),
          UniformBox{std::vector<double>(dimension, 0.0), std::vector<double>(dimension, 1.0)},
          dimension, std::vector<double>{std::ldexp(1.0, -static_cast<int>(dimension))}, "product"};
}

Problem sum_squares_problem(std::size_t dimension) {
  if (dimension == 0) throw InvalidArgument("sum-squares problem needs d >= 1");
  auto g = make_integrand(dimension, 1, [](std::span<const double> t, std::span<double> out) {
    double s = 0.0;
    for (double v : t) s += v * v;
    out[0] = s;
  });
  return {std::move(g),
          UniformBox{std::vector<double>(dimension, 0.0), std::vector<double>(dimension, 1.0)},
          dimension, std::vector<double>{static_cast<double>(dimension) / 3.0}, "sum-squares"};
}

Problem geometric_asian_call_problem(const AsianOption& option) {
  check_option(option);
  const std::size_t d = option.monitoring_dates;
  const auto times = monitoring_times(option);
  double mean_t = 0.0;
  for (double t : times) mean_t += t;
  mean_t /= static_cast<double>(d);
  const double drift = (option.rate - 0.5 * option.volatility * option.volatility) * mean_t;
  const double discount = std::exp(-option.rate * option.maturity);

  // samples are the Brownian path W(t_1), ..., W(t_d)
  auto g = make_integrand(d, 1, [=](std::span<const double> w, std::span<double> out) {
    double mean_w = 0.0;
    for (double v : w) mean_w += v;
    mean_w /= static_cast<double>(d);
    const double average = option.spot * std::exp(drift + option.volatility * mean_w);
    out[0] = discount * std::max(average - option.strike, 0.0);
  });
  return {std::move(g), BrownianMotion{times, 0.0}, d,
          std::vector<double>{geometric_asian_call_price(option)}, "geometric-asian-call"};
}

std::vector<std::string> builtin_problem_labels() {
  return {"product", "sum-squares", "geometric-asian-call", "beam"};
}

Problem builtin_problem(const std::string& label, std::size_t dimension) {
  if (label == "product") return product_problem(dimension == 0 ? 3 : dimension);
  if (label == "sum-squares") return sum_squares_problem(dimension == 0 ? 6 : dimension);
  Problem fixed;
  if (label == "geometric-asian-call") {
    fixed = geometric_asian_call_problem();
  } else if (label == "beam") {
    fixed = beam_problem();
  } else {
    throw InvalidArgument("unknown problem '" + label + "'");
  }
  if (dimension != 0 && dimension != fixed.dimension) {
    throw InvalidArgument("problem '" + label + "' has fixed dimension " +
                          std::to_string(fixed.dimension));
  }
  return fixed;
}

std::vector<Problem> builtin_problems() {
  std::vector<Problem> out;
  for (const auto& label : builtin_problem_labels()) out.push_back(builtin_problem(label));
  return out;
}

}  // namespace ldcube
