#include <bit>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <string>

#include "ldcube/error.hpp"
#include "pipeline.hpp"

namespace ldcube {

void ToleranceSpec::validate() const {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || !std::isfinite(abs_tol) || !std::isfinite(rel_tol)) {
    throw InvalidArgument("tolerances must be finite and non-negative");
  }
  if (abs_tol + rel_tol <= 0.0) throw InvalidArgument("abs_tol and rel_tol cannot both be zero");
}

bool check_tolerance(std::span<const double> bound, std::span<const double> estimate,
                     const ToleranceSpec& tol) {
  if (bound.size() != estimate.size()) {
    throw InvalidArgument("bound and estimate lengths differ");
  }
  for (std::size_t j = 0; j < bound.size(); ++j) {
    if (!(bound[j] <= std::max(tol.abs_tol, tol.rel_tol * std::fabs(estimate[j])))) return false;
  }
  return true;
}

double student_t_quantile(double probability, double degrees_of_freedom) {
  if (!(probability > 0.0 && probability < 1.0) || !(degrees_of_freedom > 0.0)) {
    throw InvalidArgument("t quantile needs 0 < p < 1 and positive degrees of freedom");
  }
  return boost::math::quantile(boost::math::students_t(degrees_of_freedom), probability);
}

namespace detail {

Generator make_generator(const GeneratorSpec& spec, const GeneratorTables& tables) {
  if (spec.kind == GeneratorKind::Lattice && tables.generating_vector) {
    return Generator(spec, *tables.generating_vector);
  }
  if (spec.kind == GeneratorKind::Sobol && tables.direction_numbers) {
    return Generator(spec, *tables.direction_numbers);
  }
  return Generator(spec);
}

Matrix evaluate_points(const Problem& problem, const Measure& measure, const Matrix& points,
                       double& evaluation_time) {
  const auto samples = measure.transform(points);
  const Stopwatch watch;
  auto values = evaluate(*problem.integrand, samples);
  evaluation_time += watch.seconds();
  return values;
}

void check_sizes(std::size_t n_init, std::size_t n_max, std::uint64_t capacity) {
  if (n_init == 0 || !std::has_single_bit(n_init)) {
    throw InvalidArgument("n_init must be a power of 2, got " + std::to_string(n_init));
  }
  if (n_max < n_init) throw InvalidArgument("n_max must be at least n_init");
  if (n_max > capacity) {
    throw CapacityError("n_max = " + std::to_string(n_max) + " exceeds the generator capacity " +
                        std::to_string(capacity));
  }
}

}  // namespace detail
}  // namespace ldcube
