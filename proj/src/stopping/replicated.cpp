#include <cmath>
#include <random>

#include "ldcube/error.hpp"
#include "ldcube/simd/kernels.hpp"
#include "pipeline.hpp"

namespace ldcube {

StoppingResult integrate_replicated(const Problem& problem, const ToleranceSpec& tol,
                                    const ReplicatedOptions& options) {
  const detail::Stopwatch total;
  tol.validate();
  const std::size_t r = options.replicates;
  if (r < 4) throw InvalidArgument("replicated criterion needs at least 4 replicates");
  if (!(options.confidence > 0.0 && options.confidence < 1.0) || !(options.inflation > 0.0)) {
    throw InvalidArgument("confidence must lie in (0, 1) and inflation must be positive");
  }
  const Randomization randomization =
      options.randomization.value_or(default_randomization(options.kind));
  if (randomization == Randomization::None) {
    throw PolicyError("replicated criterion needs randomized replicates");
  }

  const Measure measure(problem.measure);
  const std::size_t d = problem.dimension, q = problem.output_size();
  if (measure.dimension() != d) throw InvalidArgument("problem measure dimension mismatch");

  std::mt19937_64 seeds(options.seed);
  std::vector<Generator> generators;
  for (std::size_t k = 0; k < r; ++k) {
    generators.push_back(detail::make_generator(
        GeneratorSpec{options.kind, d, seeds(), randomization}, options.tables));
  }
  detail::check_sizes(options.n_init, options.n_max, generators.front().capacity());

  const double t = student_t_quantile(0.5 * (1.0 + options.confidence), static_cast<double>(r - 1));
  const auto& kernels = simd::active_kernels();

  StoppingResult result;
  result.replications = r;
  std::vector<double> sums(r * q, 0.0);  // replicate k, output j at k*q + j
  std::size_t n = 0, next = options.n_init;
  while (true) {
    // new block [n, next) of every replicate, evaluated as one batch
    const std::size_t block = next - n;
    Matrix points;
    for (const auto& g : generators) points.append_rows(g.generate(n, block).points);
    const auto values = detail::evaluate_points(problem, measure, points, result.evaluation_time);
    for (std::size_t k = 0; k < r; ++k) {
      const auto rows = values.values().subspan(k * block * q, block * q);
      kernels.column_sums(rows, std::span<double>(sums).subspan(k * q, q));
    }
    n = next;

    result.estimate.assign(q, 0.0);
    result.error_bound.assign(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
      double mean = 0.0;
      for (std::size_t k = 0; k < r; ++k) mean += sums[k * q + j] / static_cast<double>(n);
      mean /= static_cast<double>(r);
      double ss = 0.0;
      for (std::size_t k = 0; k < r; ++k) {
        const double dev = sums[k * q + j] / static_cast<double>(n) - mean;
        ss += dev * dev;
      }
      const double sd = std::sqrt(ss / static_cast<double>(r - 1));
      result.estimate[j] = mean;
      result.error_bound[j] = t * sd / std::sqrt(static_cast<double>(r)) * options.inflation;
    }
    result.n_used = n;
    result.converged = check_tolerance(result.error_bound, result.estimate, tol);
    if (result.converged || 2 * n > options.n_max) break;
    next = 2 * n;
    ++result.stages;
  }
  result.wall_time = total.seconds();
  return result;
}

}  // namespace ldcube
