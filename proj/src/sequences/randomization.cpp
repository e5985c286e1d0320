#include "randomization.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "ldcube/sequences.hpp"

namespace ldcube::detail {
namespace {

// Doubles are built from raw engine output; std::uniform_real_distribution
// is not specified bit for bit across standard libraries.
double unit_open(std::mt19937_64& engine) {
  for (;;) {
    const double u = static_cast<double>(engine() >> 11) * 0x1p-53;
    if (u > 0.0) return u;
  }
}

}  // namespace

std::vector<double> draw_lattice_shift(std::size_t dimension, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> shift(dimension);
  for (double& s : shift) s = unit_open(engine);
  return shift;
}

DigitalRandomization draw_digital(std::size_t dimension, std::uint64_t seed, bool scramble) {
  std::mt19937_64 engine(seed);
  DigitalRandomization out;
  out.shift.resize(dimension);
  if (scramble) out.scramble.resize(dimension);
  for (std::size_t j = 0; j < dimension; ++j) {
    if (scramble) {
      for (unsigned r = 0; r < 32; ++r) {
        // digit c lives in bit 31 - c; row r may use digits 0..r
        const std::uint32_t allowed = ~std::uint32_t{0} << (31 - r);
        const std::uint32_t diagonal = std::uint32_t{1} << (31 - r);
        out.scramble[j][r] = (static_cast<std::uint32_t>(engine()) & allowed) | diagonal;
      }
    }
    out.shift[j] = static_cast<std::uint32_t>(engine() >> 32);
  }
  return out;
}

std::uint32_t apply_scramble(const std::array<std::uint32_t, 32>& rows, std::uint32_t digits) {
  std::uint32_t out = 0;
  for (unsigned r = 0; r < 32; ++r) {
    const auto bit = static_cast<std::uint32_t>(std::popcount(rows[r] & digits) & 1);
    out |= bit << (31 - r);
  }
  return out;
}

unsigned halton_depth(std::uint32_t base) {
  return static_cast<unsigned>(std::ceil(53.0 / std::log2(static_cast<double>(base))));
}

HaltonPermutations draw_halton(std::size_t dimension, std::uint64_t seed) {
  const auto& bases = halton_bases();
  std::mt19937_64 engine(seed);
  HaltonPermutations out;
  out.depth.resize(dimension);
  out.table.resize(dimension);
  for (std::size_t j = 0; j < dimension; ++j) {
    const std::uint32_t base = bases[j];
    const unsigned depth = halton_depth(base);
    out.depth[j] = depth;
    auto& table = out.table[j];
    table.resize(static_cast<std::size_t>(depth) * base);
    for (unsigned k = 0; k < depth; ++k) {
      std::uint16_t* perm = table.data() + static_cast<std::size_t>(k) * base;
      std::iota(perm, perm + base, std::uint16_t{0});
      for (std::uint32_t i = base - 1; i > 0; --i) {
        const auto pick = static_cast<std::uint32_t>(engine() % (i + 1));
        std::swap(perm[i], perm[pick]);
      }
    }
  }
  return out;
}

double permuted_radical_inverse(std::uint64_t index, std::uint32_t base, unsigned depth,
                                const std::uint16_t* permutations) {
  std::array<std::uint32_t, 64> digits{};
  for (unsigned k = 0; k < depth && index != 0; ++k) {
    digits[k] = static_cast<std::uint32_t>(index % base);
    index /= base;
  }
  const double b = static_cast<double>(base);
  double acc = 0.0;
  for (unsigned k = depth; k-- > 0;) {
    acc = (acc + permutations[static_cast<std::size_t>(k) * base + digits[k]]) / b;
  }
  return acc < 1.0 ? acc : std::nextafter(1.0, 0.0);
}

}  // namespace ldcube::detail
