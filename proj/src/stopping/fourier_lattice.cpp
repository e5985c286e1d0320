#include <fftw3.h>

#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>

#include "ldcube/error.hpp"
#include "ldcube/simd/kernels.hpp"
#include "pipeline.hpp"

namespace ldcube {
namespace {

// FFTW planning is not thread-safe; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Magnitudes |Y_k|, k = 0..n/2, of Y_k = (1/n) sum_i y_i exp(-2 pi i k i / n).
std::vector<double> half_spectrum(const std::vector<double>& y) {
  const std::size_t n = y.size();
  auto* in = fftw_alloc_real(n);
  auto* out = fftw_alloc_complex(n / 2 + 1);
  std::unique_ptr<double, void (*)(void*)> hold_in(in, fftw_free);
  std::unique_ptr<fftw_complex, void (*)(void*)> hold_out(out, fftw_free);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  std::copy(y.begin(), y.end(), in);
  fftw_execute(plan);
  std::vector<double> magnitude(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    magnitude[k] = std::hypot(out[k][0], out[k][1]) / static_cast<double>(n);
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return magnitude;
}

std::size_t reverse_bits(std::size_t i, unsigned bits) {
  std::size_t r = 0;
  for (unsigned b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
  return r;
}

// Levels refined when the sample size doubles.
constexpr unsigned kRefreshLevels = 4;

// Within every block of 2^(l+1) wavenumbers, position f and f + 2^l swap
// when the first block's pair shows the later coefficient to be larger.
void flip_level(std::vector<std::size_t>& map, std::span<const double> magnitude, unsigned l) {
  const std::size_t half = std::size_t{1} << l;
  for (std::size_t f = 1; f < half; ++f) {
    if (!(magnitude[map[half + f]] > magnitude[map[f]])) continue;
    for (std::size_t b = 0; b < map.size(); b += 2 * half) std::swap(map[b + f], map[b + half + f]);
  }
}

// |Y_k| for k = 0..n-1 from the half spectrum of a real sequence.
std::vector<double> full_magnitudes(const std::vector<double>& half, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = half[k <= n / 2 ? k : n - k];
  return out;
}

}  // namespace

std::vector<std::size_t> wavenumber_map(std::span<const double> magnitude) {
  const std::size_t n = magnitude.size();
  if (n == 0 || !std::has_single_bit(n)) throw InvalidArgument("map size must be a power of 2");
  std::vector<std::size_t> map(n);
  for (std::size_t p = 0; p < n; ++p) map[p] = p;
  for (unsigned l = static_cast<unsigned>(std::countr_zero(n)); l-- > 1;) flip_level(map, magnitude, l);
  return map;
}

StoppingResult integrate_fourier_lattice(const Problem& problem, const ToleranceSpec& tol,
                                         const FourierOptions& options) {
  const detail::Stopwatch total;
  tol.validate();
  if (options.kind != GeneratorKind::Lattice) {
    throw InvalidArgument("the Fourier criterion needs the shifted lattice generator, not " +
                          std::string(to_string(options.kind)));
  }
  if (!(options.inflation > 0.0)) throw InvalidArgument("inflation must be positive");

  const Measure measure(problem.measure);
  const std::size_t d = problem.dimension, q = problem.output_size();
  if (measure.dimension() != d) throw InvalidArgument("problem measure dimension mismatch");

  const auto generator = detail::make_generator(
      GeneratorSpec{GeneratorKind::Lattice, d, options.seed, Randomization::Shift}, options.tables);
  detail::check_sizes(options.n_init, options.n_max, generator.capacity());

  StoppingResult result;
  std::vector<std::vector<double>> values(q);  // per output, radical-inverse order
  std::vector<std::vector<std::size_t>> maps(q);
  std::size_t n = 0, next = options.n_init;
  while (true) {
    auto batch = generator.generate(n, next - n);
    if (options.periodization == Periodization::Baker) {
      simd::active_kernels().tent(batch.points.values());
    }
    const auto block = detail::evaluate_points(problem, measure, batch.points, result.evaluation_time);
    for (std::size_t i = 0; i < block.rows(); ++i) {
      for (std::size_t j = 0; j < q; ++j) values[j].push_back(block(i, j));
    }
    n = next;

    const unsigned m = static_cast<unsigned>(std::countr_zero(n));
    result.estimate.assign(q, 0.0);
    result.error_bound.assign(q, 0.0);
    std::vector<double> ordered(n);
    for (std::size_t j = 0; j < q; ++j) {
      // point i of the extensible sequence is lattice node reverse_bits(i)
      for (std::size_t i = 0; i < n; ++i) ordered[reverse_bits(i, m)] = values[j][i];
      double sum = 0.0;
      for (double v : values[j]) sum += v;
      result.estimate[j] = sum / static_cast<double>(n);
      const auto magnitude = full_magnitudes(half_spectrum(ordered), n);
      auto& map = maps[j];
      if (map.empty()) {
        map = wavenumber_map(magnitude);
      } else {
        const std::size_t old = map.size();
        map.resize(n);
        for (std::size_t p = 0; p < old; ++p) map[old + p] = old + map[p];
        for (unsigned l = m; l-- > 1 && l + kRefreshLevels >= m;) flip_level(map, magnitude, l);
      }
      double band = INFINITY;
      if (m >= 1 + options.band_lag) {
        band = 0.0;
        const std::size_t lo = std::size_t{1} << (m - 1 - options.band_lag);
        for (std::size_t p = lo; p < 2 * lo; ++p) band += magnitude[map[p]];
      }
      result.error_bound[j] = options.inflation * band;
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
