#include <bit>
#include <cmath>

#include "ldcube/simd/kernels.hpp"

namespace ldcube::simd {
namespace {

constexpr double kTwoPowMinus32 = 0x1p-32;

void lattice_rows(std::span<const std::uint32_t> k, std::span<const std::uint32_t> z,
                  std::span<const double> shift, std::span<double> out) {
  const std::size_t dim = z.size();
  for (std::size_t i = 0; i < k.size(); ++i) {
    double* row = out.data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      const std::uint32_t product = k[i] * z[j];
      row[j] = static_cast<double>(product) * kTwoPowMinus32;
    }
    if (!shift.empty()) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double v = row[j] + shift[j];
        row[j] = v >= 1.0 ? v - 1.0 : v;
      }
    }
  }
}

void digital_rows(std::uint64_t first_index, std::span<const std::uint32_t> directions,
                  std::span<const std::uint32_t> shift, std::span<std::uint32_t> state,
                  std::span<double> out) {
  const std::size_t dim = state.size();
  const std::size_t rows = dim == 0 ? 0 : out.size() / dim;
  for (std::size_t i = 0; i < rows; ++i) {
    double* row = out.data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      row[j] = static_cast<double>(state[j] ^ shift[j]) * kTwoPowMinus32;
    }
    const int bit = std::countr_zero(first_index + i + 1);
    if (bit < 32) {
      const std::uint32_t* v = directions.data() + static_cast<std::size_t>(bit) * dim;
      for (std::size_t j = 0; j < dim; ++j) state[j] ^= v[j];
    }
  }
}

void affine_rows(std::span<const double> u, std::span<const double> lower,
                 std::span<const double> width, std::span<double> out) {
  const std::size_t dim = lower.size();
  const std::size_t rows = dim == 0 ? 0 : u.size() / dim;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double scaled = u[i * dim + j] * width[j];
      out[i * dim + j] = lower[j] + scaled;
    }
  }
}

void tent(std::span<double> x) {
  for (double& v : x) v = 1.0 - std::fabs(2.0 * v - 1.0);
}

void column_sums(std::span<const double> values, std::span<double> sums) {
  const std::size_t cols = sums.size();
  const std::size_t rows = cols == 0 ? 0 : values.size() / cols;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) sums[j] += values[i * cols + j];
  }
}

constexpr Kernels kScalar{Isa::Scalar, lattice_rows, digital_rows, affine_rows, tent, column_sums};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

}  // namespace ldcube::simd
