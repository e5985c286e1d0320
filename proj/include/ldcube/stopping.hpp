#pragma once

// Adaptive sample sizes: n doubles until an error bound meets
//   bound_j <= max(abs_tol, rel_tol * |estimate_j|)  for every output j.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ldcube/integrands.hpp"
#include "ldcube/sequences.hpp"

namespace ldcube {

struct ToleranceSpec {
  double abs_tol = 1e-2;
  double rel_tol = 0.0;

  // Throws InvalidArgument for negative, non-finite or both-zero tolerances.
  void validate() const;
};

bool check_tolerance(std::span<const double> bound, std::span<const double> estimate,
                     const ToleranceSpec& tol);

struct StoppingResult {
  std::vector<double> estimate;
  std::vector<double> error_bound;
  std::size_t n_used = 0;        // points per replicate
  std::size_t replications = 1;
  std::size_t stages = 0;        // doublings after the initial stage
  bool converged = false;
  double wall_time = 0.0;        // seconds, whole run
  double evaluation_time = 0.0;  // seconds spent inside integrand evaluation
};

// Custom parameter tables; nullptr selects the bundled ones. Pointees must
// outlive the call.
struct GeneratorTables {
  const DirectionNumberTable* direction_numbers = nullptr;
  const LatticeGeneratingVector* generating_vector = nullptr;
};

struct ReplicatedOptions {
  GeneratorKind kind = GeneratorKind::Sobol;
  std::optional<Randomization> randomization;  // default for the kind
  std::size_t replicates = 16;
  std::size_t n_init = 256;
  std::size_t n_max = std::size_t{1} << 20;
  double confidence = 0.99;
  double inflation = 1.2;
  std::uint64_t seed = 0;
  GeneratorTables tables;
};

// R independently randomized copies of one low-discrepancy sequence; each
// replicate extends its own sequence when n doubles. The bound is
//   t_{(1+confidence)/2, R-1} * sd(replicate means) / sqrt(R) * inflation
// and the estimate is the mean of the replicate means.
StoppingResult integrate_replicated(const Problem& problem, const ToleranceSpec& tol,
                                    const ReplicatedOptions& options = {});

enum class Periodization { None, Baker };

struct FourierOptions {
  GeneratorKind kind = GeneratorKind::Lattice;  // anything else is rejected
  std::size_t n_init = 256;
  std::size_t n_max = std::size_t{1} << 20;
  double inflation = 5.0;
  // The bound sums mapped wavenumbers [2^(m-1-band_lag), 2^(m-band_lag)).
  unsigned band_lag = 0;
  Periodization periodization = Periodization::Baker;
  std::uint64_t seed = 0;
  GeneratorTables tables;
};

// One shifted extensible lattice. At n = 2^m the n values, ordered by
// lattice node, go through an n-point DFT. Coefficient indices are mapped to
// wavenumbers by pairing k with k + 2^l and giving the larger magnitude the
// smaller wavenumber; the map is kept and refined as n doubles. The bound is
// inflation times the summed magnitudes over one dyadic wavenumber band and
// the estimate is the zero-frequency coefficient (the sample mean).
StoppingResult integrate_fourier_lattice(const Problem& problem, const ToleranceSpec& tol,
                                         const FourierOptions& options = {});

// Wavenumber map over n = magnitude.size() coefficients, built from scratch:
// result[p] is the DFT index assigned wavenumber p.
std::vector<std::size_t> wavenumber_map(std::span<const double> magnitude);

// Student t quantile used by the replicated criterion.
double student_t_quantile(double probability, double degrees_of_freedom);

}  // namespace ldcube
