#pragma once

// Seeded randomization state. Generator and randomize() both draw from
// here so the two routes agree bit for bit.

#include <array>
#include <cstdint>
#include <vector>

namespace ldcube::detail {

// Mod-1 shift vector with entries in (0, 1).
std::vector<double> draw_lattice_shift(std::size_t dimension, std::uint64_t seed);

struct DigitalRandomization {
  // Per coordinate, rows of a unit lower-triangular 32x32 bit matrix; row r
  // (digit r, most significant first) stored as a mask over the input digits.
  // Empty when no scramble is requested.
  std::vector<std::array<std::uint32_t, 32>> scramble;
  std::vector<std::uint32_t> shift;
};

DigitalRandomization draw_digital(std::size_t dimension, std::uint64_t seed, bool scramble);

std::uint32_t apply_scramble(const std::array<std::uint32_t, 32>& rows, std::uint32_t digits);

struct HaltonPermutations {
  std::vector<unsigned> depth;                        // digit positions per coordinate
  std::vector<std::vector<std::uint16_t>> table;      // depth * base entries per coordinate
};

HaltonPermutations draw_halton(std::size_t dimension, std::uint64_t seed);

// Number of base-b digits that resolve 53 bits.
unsigned halton_depth(std::uint32_t base);

double permuted_radical_inverse(std::uint64_t index, std::uint32_t base, unsigned depth,
                                const std::uint16_t* permutations);

}  // namespace ldcube::detail
