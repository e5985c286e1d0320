#pragma once

// Data-parallel inner loops of point generation, transformation and
// reduction. Every kernel has a scalar reference implementation; vector
// variants must reproduce it bit for bit and are picked at runtime from the
// capabilities of the executing CPU.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace ldcube::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct Kernels {
  Isa isa;

  // Rank-1 lattice rows: out[i*dim + j] = ((k[i] * z[j]) mod 2^32) * 2^-32,
  // plus shift[j] wrapped back into [0,1) when `shift` is non-empty.
  void (*lattice_rows)(std::span<const std::uint32_t> k, std::span<const std::uint32_t> z,
                       std::span<const double> shift, std::span<double> out);

  // Gray-code digital sequence. `state` holds the raw digits of point
  // `first_index` on entry and of point `first_index + rows` on exit.
  // directions is 32 x dim, row b holding the direction values XORed in
  // when bit b flips. out[i*dim + j] = (state_j ^ shift_j) * 2^-32.
  void (*digital_rows)(std::uint64_t first_index, std::span<const std::uint32_t> directions,
                       std::span<const std::uint32_t> shift, std::span<std::uint32_t> state,
                       std::span<double> out);

  // out[i*dim + j] = lower[j] + u[i*dim + j] * width[j]
  void (*affine_rows)(std::span<const double> u, std::span<const double> lower,
                      std::span<const double> width, std::span<double> out);

  // Baker's (tent) periodization in place: x <- 1 - |2x - 1|.
  void (*tent)(std::span<double> x);

  // sums[j] += values[i*cols + j] accumulated in row order.
  void (*column_sums)(std::span<const double> values, std::span<double> sums);
};

const Kernels& scalar_kernels();

// nullptr when the AVX2 variants were not compiled in.
const Kernels* avx2_kernels();

bool cpu_supports(Isa isa);

// Best variant for this CPU. LDCUBE_SIMD=scalar in the environment forces
// the reference kernels.
const Kernels& active_kernels();

}  // namespace ldcube::simd
