#pragma once

#include <chrono>

#include "ldcube/integrands.hpp"
#include "ldcube/sequences.hpp"
#include "ldcube/stopping.hpp"

namespace ldcube::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

Generator make_generator(const GeneratorSpec& spec, const GeneratorTables& tables);

// Points in [0,1)^d -> measure -> integrand values; adds the time spent in
// the integrand to `evaluation_time`.
Matrix evaluate_points(const Problem& problem, const Measure& measure, const Matrix& points,
                       double& evaluation_time);

void check_sizes(std::size_t n_init, std::size_t n_max, std::uint64_t capacity);

}  // namespace ldcube::detail
